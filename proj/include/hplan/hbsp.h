#ifndef HPLAN_HBSP_H
#define HPLAN_HBSP_H

#include <cstdint>
#include <iosfwd>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include <hplan/signature.h>
#include <hplan/union_graph.h>

namespace hplan {

/// Union-graph vertex paired with a reduced signature (id in the session's pool).
struct AugmentedVertex {
    int cell = 0;
    int sig = WordPool::kEmpty;

    friend bool operator==(const AugmentedVertex&, const AugmentedVertex&) = default;
};

enum class QueryStatus { Found, ExceedsBound, Exhausted, Unreachable };

const char* to_string(QueryStatus s);

struct QueryResult {
    QueryStatus status = QueryStatus::Unreachable;
    Cost distance = kInfiniteCost;
};

struct SettledRecord {
    AugmentedVertex vertex;
    Cost distance = 0;
};

/// Goal-rooted Dijkstra over cell x signature, restricted to signatures in
/// the suffix set of the reference words. Stops and resumes on demand.
class HbspSession
{
public:
    HbspSession(const UnionGraph& graph, int goal_vertex, const std::vector<Word>& references);
    HbspSession(const HbspSession&) = delete;
    HbspSession& operator=(const HbspSession&) = delete;

    const UnionGraph& graph() const { return *m_graph; }
    const SuffixSet& suffix_set() const { return m_suffix; }
    const std::vector<Word>& references() const { return m_references; }
    WordPool& pool() { return m_pool; }
    const WordPool& pool() const { return m_pool; }
    int goal_vertex() const { return m_goal; }

    /// Successors that stay inside the suffix set, with edge lengths.
    std::vector<std::pair<AugmentedVertex, Cost>> succ(const AugmentedVertex& v);

    QueryResult query(const AugmentedVertex& u, Cost bound = kInfiniteCost);
    QueryResult query(int cell, const Word& sig, Cost bound = kInfiniteCost);

    /// Distance from `cell` to the goal within the class completing reference
    /// `s` given the signature `s_u` accumulated so far.
    QueryResult d_s(int cell, const Word& s_u, const Word& s, Cost bound = kInfiniteCost);

    /// Settles everything up to `bound` (default: the whole reachable graph).
    void drain(Cost bound = kInfiniteCost);

    bool settled(const AugmentedVertex& v) const;
    std::optional<Cost> distance(const AugmentedVertex& v) const;
    const std::vector<SettledRecord>& settled_records() const { return m_settled_order; }
    std::size_t expansions() const { return m_settled_order.size(); }
    Cost last_key() const { return m_last_key; }

    /// CSV with header surface,x,y,sig,dist_mm, one line per settled vertex.
    void write_csv(std::ostream& os) const;

private:
    struct Item {
        Cost dist;
        int cell;
        int sig;
    };
    struct ItemAfter {
        const HbspSession* self;
        bool operator()(const Item& a, const Item& b) const;
    };

    static std::uint64_t key(int cell, int sig) { return (std::uint64_t(std::uint32_t(sig)) << 32) | std::uint32_t(cell); }
    int step(int sig, int edge_word);
    void skip_stale();

    const UnionGraph* m_graph;
    int m_goal;
    std::vector<Word> m_references;
    SuffixSet m_suffix;
    WordPool m_pool;
    std::vector<std::uint8_t> m_in_suffix; ///< by pool id
    std::vector<std::string> m_text;       ///< by pool id
    std::unordered_map<std::uint64_t, int> m_steps;
    std::unordered_map<std::uint64_t, Cost> m_dist;
    std::unordered_map<std::uint64_t, Cost> m_final;
    std::priority_queue<Item, std::vector<Item>, ItemAfter> m_open;
    std::vector<SettledRecord> m_settled_order;
    Cost m_last_key = 0;
};

} // namespace hplan

#endif
