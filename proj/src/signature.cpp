#include <hplan/signature.h>

#include <algorithm>
#include <charconv>
#include <cmath>

namespace hplan {

namespace {

bool commute(Letter a, Letter b, const World& world)
{
    return a.id != b.id && world.commutes(a.id, b.id);
}

void check_letters(const Word& w, const World& world)
{
    for (const Letter& l : w) {
        if (!world.has_letter(l.id)) {
            throw WorldError("letter " + to_string(l) + " does not resolve in this world");
        }
    }
}

// Lexicographically least representative among commuting shuffles.
Word canonical_order(Word w, const World& world)
{
    Word out;
    out.reserve(w.size());
    while (!w.empty()) {
        std::size_t pick = 0;
        for (std::size_t i = 1; i < w.size(); ++i) {
            bool movable = true;
            for (std::size_t k = 0; k < i && movable; ++k) {
                movable = commute(w[i], w[k], world);
            }
            if (movable && w[i] < w[pick]) {
                pick = i;
            }
        }
        out.push_back(w[pick]);
        w.erase(w.begin() + pick);
    }
    return out;
}

struct Crossing {
    double t;
    Letter letter;
};

double lattice(double v, double res) { return v / res; }

void surface_crossings(double x0, double y0, double x1, double y1, double ta, double tb, int surface,
                       const World& world, std::vector<Crossing>& out)
{
    const double ax = x0 + ta * (x1 - x0);
    const double bx = x0 + tb * (x1 - x0);
    for (int bi : world.beams_on(surface)) {
        const Beam& beam = world.beams()[bi];
        const bool side_a = ax >= beam.x;
        const bool side_b = bx >= beam.x;
        if (side_a == side_b) {
            continue;
        }
        const double t = (beam.x - x0) / (x1 - x0);
        const double y = y0 + t * (y1 - y0);
        if (y < beam.span_on(surface)->y_start - 1e-9) {
            continue;
        }
        out.push_back({ t, { beam.letter, bx < ax } });
    }
}

void require_free(double x, double y, int surface, const World& world)
{
    const Cell c{ static_cast<int>(std::floor(x + 0.5)), static_cast<int>(std::floor(y + 0.5)) };
    const Surface* s = world.surface(surface);
    if (!s) {
        throw InvalidSegment("unknown surface " + std::to_string(surface));
    }
    if (!s->contains(c) || !world.free(surface, c)) {
        throw InvalidSegment("segment endpoint (" + std::to_string(x * world.resolution()) + ", " +
                             std::to_string(y * world.resolution()) + ") on surface " + std::to_string(surface) +
                             " is not in free space");
    }
}

// Endpoints in lattice units.
Word lattice_crossings(double x0, double y0, int s0, double x1, double y1, int s1, const World& world)
{
    require_free(x0, y0, s0, world);
    require_free(x1, y1, s1, world);

    std::vector<Crossing> before, after;
    if (s0 == s1) {
        if (x0 != x1) {
            surface_crossings(x0, y0, x1, y1, 0.0, 1.0, s0, world, before);
        }
        std::sort(before.begin(), before.end(), [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
        Word w;
        for (const auto& c : before) {
            w.push_back(c.letter);
        }
        return w;
    }

    const Gate* gate = world.gate_between(s0, s1);
    if (!gate) {
        throw WorldError("segment changes from surface " + std::to_string(s0) + " to " + std::to_string(s1) +
                         " but no single gate joins them");
    }
    // transition at the first gate cell met along the segment
    const double len = std::hypot(x1 - x0, y1 - y0);
    const int steps = std::max(1, static_cast<int>(std::ceil(len * 8.0)));
    double tstar = -1.0;
    for (int k = 0; k <= steps; ++k) {
        const double t = double(k) / steps;
        const Cell c{ static_cast<int>(std::floor(x0 + t * (x1 - x0) + 0.5)),
                      static_cast<int>(std::floor(y0 + t * (y1 - y0) + 0.5)) };
        if (world.is_gate_cell(*gate, c)) {
            tstar = t;
            break;
        }
    }
    if (tstar < 0.0) {
        throw InvalidSegment("segment between surfaces " + std::to_string(s0) + " and " + std::to_string(s1) +
                             " does not pass through their gate");
    }
    if (x0 != x1) {
        surface_crossings(x0, y0, x1, y1, 0.0, tstar, s0, world, before);
        surface_crossings(x0, y0, x1, y1, tstar, 1.0, s1, world, after);
    }
    const auto by_t = [](const Crossing& a, const Crossing& b) { return a.t < b.t; };
    std::sort(before.begin(), before.end(), by_t);
    std::sort(after.begin(), after.end(), by_t);

    Word w;
    Word deferred;
    for (const auto& c : before) {
        const Beam& beam = world.beams()[world.letter(c.letter.id).index];
        // a beam whose anchor is not on the surface being left is crossed after the gate
        if (std::abs(c.t - tstar) < 1e-12 && beam.surface_id != s0) {
            deferred.push_back(c.letter);
        } else {
            w.push_back(c.letter);
        }
    }
    w.push_back({ gate->letter, s0 > s1 });
    w.insert(w.end(), deferred.begin(), deferred.end());
    for (const auto& c : after) {
        w.push_back(c.letter);
    }
    return w;
}

} // namespace

std::size_t WordHash::operator()(const Word& w) const noexcept
{
    std::size_t h = 1469598103934665603ull;
    for (const Letter& l : w) {
        h ^= std::size_t(l.id * 2 + (l.inverse ? 1 : 0));
        h *= 1099511628211ull;
    }
    return h;
}

Word invert(const Word& w)
{
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        out.push_back(invert(*it));
    }
    return out;
}

std::string to_string(Letter l) { return (l.inverse ? "~t" : "t") + std::to_string(l.id); }

std::string to_string(const Word& w)
{
    if (w.empty()) {
        return "^";
    }
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) {
            s += '.';
        }
        s += to_string(w[i]);
    }
    return s;
}

Word parse_word(std::string_view text)
{
    if (text == "^") {
        return {};
    }
    Word w;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = std::min(text.find('.', pos), text.size());
        std::string_view tok = text.substr(pos, end - pos);
        Letter l;
        if (!tok.empty() && tok.front() == '~') {
            l.inverse = true;
            tok.remove_prefix(1);
        }
        if (tok.size() < 2 || tok.front() != 't') {
            throw FormatError("malformed word '" + std::string(text) + "'");
        }
        tok.remove_prefix(1);
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), l.id);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || l.id <= 0) {
            throw FormatError("malformed word '" + std::string(text) + "'");
        }
        w.push_back(l);
        if (end == text.size()) {
            break;
        }
        pos = end + 1;
    }
    return w;
}

Word reduce(const Word& w, const World& world)
{
    check_letters(w, world);
    Word out;
    out.reserve(w.size());
    for (const Letter& x : w) {
        bool cancelled = false;
        for (std::size_t k = out.size(); k-- > 0;) {
            if (out[k] == invert(x)) {
                out.erase(out.begin() + std::ptrdiff_t(k));
                cancelled = true;
                break;
            }
            if (!commute(out[k], x, world)) {
                break;
            }
        }
        if (!cancelled) {
            out.push_back(x);
        }
    }
    return canonical_order(std::move(out), world);
}

Word concat_reduce(const Word& a, const Word& b, const World& world)
{
    Word ab;
    ab.reserve(a.size() + b.size());
    ab.insert(ab.end(), a.begin(), a.end());
    ab.insert(ab.end(), b.begin(), b.end());
    return reduce(ab, world);
}

Word segment_crossings(const SurfacePoint& p0, const SurfacePoint& p1, const World& world)
{
    const double r = world.resolution();
    return lattice_crossings(lattice(p0.x, r), lattice(p0.y, r), p0.surface, lattice(p1.x, r), lattice(p1.y, r),
                             p1.surface, world);
}

Word cell_segment_crossings(Cell c0, int s0, Cell c1, int s1, const World& world)
{
    return lattice_crossings(c0.x, c0.y, s0, c1.x, c1.y, s1, world);
}

Word path_signature(const std::vector<SurfacePoint>& polyline, const World& world)
{
    Word w;
    if (polyline.size() == 1) {
        const double r = world.resolution();
        require_free(lattice(polyline[0].x, r), lattice(polyline[0].y, r), polyline[0].surface, world);
    }
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        const Word seg = segment_crossings(polyline[i - 1], polyline[i], world);
        w.insert(w.end(), seg.begin(), seg.end());
    }
    return w;
}

SuffixSet suffixes(const std::vector<Word>& words, const World& world)
{
    SuffixSet s;
    s.members.insert(Word{});
    for (const Word& w : words) {
        Word acc;
        for (const Letter& l : w) {
            acc = concat_reduce(acc, Word{ l }, world);
            s.members.insert(acc);
        }
    }
    return s;
}

WordPool::WordPool() { intern(Word{}); }

int WordPool::intern(const Word& w)
{
    auto [it, inserted] = m_ids.try_emplace(w, int(m_words.size()));
    if (inserted) {
        m_words.push_back(w);
    }
    return it->second;
}

std::optional<int> WordPool::find(const Word& w) const
{
    auto it = m_ids.find(w);
    if (it == m_ids.end()) {
        return std::nullopt;
    }
    return it->second;
}

} // namespace hplan
