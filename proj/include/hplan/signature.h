#ifndef HPLAN_SIGNATURE_H
#define HPLAN_SIGNATURE_H

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <hplan/world.h>

namespace hplan {

/// t_k (forward) or t̄_k (inverse) for a beam or gate letter id k.
struct Letter {
    int id = 0;
    bool inverse = false;

    friend bool operator==(const Letter&, const Letter&) = default;
    friend auto operator<=>(const Letter&, const Letter&) = default;
};

inline Letter invert(Letter l) { return { l.id, !l.inverse }; }

/// The empty word is ∧.
using Word = std::vector<Letter>;

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept;
};

Word invert(const Word& w);

/// `t2.t3.~t5`; the empty word renders as `^`.
std::string to_string(const Word& w);
std::string to_string(Letter l);

/// Inverse of to_string. Throws FormatError.
Word parse_word(std::string_view text);

/// Canonical h-signature. Cancels x ... x̄ whenever every letter in between
/// commutes with x (only gate/beam pairs whose beam lies on both sides of the
/// gate commute), then orders commuting neighbours lexicographically.
Word reduce(const Word& w, const World& world);

Word concat_reduce(const Word& a, const Word& b, const World& world);

/// A point in meters on a given surface.
struct SurfacePoint {
    double x = 0.0;
    double y = 0.0;
    int surface = 0;
};

/// Letters crossed in traversal order (un-reduced).
Word segment_crossings(const SurfacePoint& p0, const SurfacePoint& p1, const World& world);

/// Same as segment_crossings for lattice cell centers.
Word cell_segment_crossings(Cell c0, int s0, Cell c1, int s1, const World& world);

/// Concatenated (un-reduced) crossing word of a polyline.
Word path_signature(const std::vector<SurfacePoint>& polyline, const World& world);

/// Reduced prefixes of a set of un-reduced reference signatures.
struct SuffixSet {
    std::set<Word> members;

    bool contains(const Word& w) const { return members.count(w) != 0; }
    std::size_t size() const { return members.size(); }
};

SuffixSet suffixes(const std::vector<Word>& words, const World& world);

/// Interns words so that equality is an integer comparison.
class WordPool
{
public:
    WordPool();

    int intern(const Word& w);
    std::optional<int> find(const Word& w) const;
    const Word& get(int id) const { return m_words[id]; }
    std::size_t size() const { return m_words.size(); }

    static constexpr int kEmpty = 0;

private:
    std::vector<Word> m_words;
    std::unordered_map<Word, int, WordHash> m_ids;
};

} // namespace hplan

#endif
