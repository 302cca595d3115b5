#include "noisylearn/eld.hpp"

#include <algorithm>
#include <vector>

namespace noisylearn {

namespace {

// Tarjan over the implicit pair graph, iterative so deep graphs cannot
// overflow the call stack. Successor sets per component state are
// deduplicated once; pair successors are their cartesian product.
struct PairGraph {
    const Dfa& dfa;
    std::vector<std::vector<State>> succ;

    explicit PairGraph(const Dfa& d) : dfa(d), succ(d.state_count) {
        for (State q = 0; q < d.state_count; ++q) {
            auto& s = succ[q];
            s.reserve(d.alphabet_size);
            for (Letter a = 0; a < d.alphabet_size; ++a) s.push_back(d.next(q, a));
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
        }
    }

    std::size_t vertex_count() const {
        return static_cast<std::size_t>(dfa.state_count) * dfa.state_count;
    }
    State first(std::size_t v) const { return static_cast<State>(v / dfa.state_count); }
    State second(std::size_t v) const { return static_cast<State>(v % dfa.state_count); }
    std::size_t vertex(State q1, State q2) const {
        return static_cast<std::size_t>(q1) * dfa.state_count + q2;
    }
};

std::vector<std::uint32_t> strongly_connected_components(const PairGraph& g,
                                                         std::uint32_t& scc_count) {
    const std::size_t n = g.vertex_count();
    constexpr std::uint32_t kUnvisited = ~std::uint32_t{0};
    std::vector<std::uint32_t> index(n, kUnvisited), lowlink(n), scc_of(n, kUnvisited);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::uint32_t next_index = 0;
    scc_count = 0;

    struct Frame {
        std::size_t v;
        std::size_t i, j;  // position in succ(first) x succ(second)
    };
    std::vector<Frame> frames;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        frames.push_back({root, 0, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& s1 = g.succ[g.first(f.v)];
            const auto& s2 = g.succ[g.second(f.v)];
            bool descended = false;
            while (f.i < s1.size()) {
                std::size_t w = g.vertex(s1[f.i], s2[f.j]);
                if (++f.j == s2.size()) {
                    f.j = 0;
                    ++f.i;
                }
                if (index[w] == kUnvisited) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) lowlink[f.v] = std::min(lowlink[f.v], index[w]);
            }
            if (descended) continue;
            std::size_t v = f.v;
            frames.pop_back();
            if (!frames.empty())
                lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
            if (lowlink[v] == index[v]) {
                for (;;) {
                    std::size_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    scc_of[w] = scc_count;
                    if (w == v) break;
                }
                ++scc_count;
            }
        }
    }
    return scc_of;
}

}  // namespace

std::optional<EldWitness> eld_witness(const Dfa& dfa) {
    dfa.validate();
    PairGraph g(dfa);
    const std::size_t n = g.vertex_count();

    std::uint32_t scc_count = 0;
    std::vector<std::uint32_t> scc_of = strongly_connected_components(g, scc_count);

    std::vector<std::uint8_t> bottom(scc_count, 1);
    for (std::size_t v = 0; v < n; ++v)
        for (State t1 : g.succ[g.first(v)])
            for (State t2 : g.succ[g.second(v)])
                if (scc_of[g.vertex(t1, t2)] != scc_of[v]) bottom[scc_of[v]] = 0;

    std::vector<std::uint8_t> reachable(n, 0);
    std::vector<std::size_t> queue;
    std::size_t start = g.vertex(dfa.initial, dfa.initial);
    reachable[start] = 1;
    queue.push_back(start);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::size_t v = queue[head];
        for (State t1 : g.succ[g.first(v)])
            for (State t2 : g.succ[g.second(v)]) {
                std::size_t w = g.vertex(t1, t2);
                if (!reachable[w]) {
                    reachable[w] = 1;
                    queue.push_back(w);
                }
            }
    }

    for (std::size_t v = 0; v < n; ++v) {
        if (!reachable[v] || !bottom[scc_of[v]]) continue;
        State q1 = g.first(v), q2 = g.second(v);
        if (dfa.is_accepting(q1) && !dfa.is_accepting(q2)) return EldWitness{q1, q2};
    }
    return std::nullopt;
}

}  // namespace noisylearn
