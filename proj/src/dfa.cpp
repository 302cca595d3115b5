#include "noisylearn/dfa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace noisylearn {

void Dfa::validate() const {
    if (state_count == 0) throw std::invalid_argument("dfa: state_count must be positive");
    if (alphabet_size == 0) throw std::invalid_argument("dfa: alphabet_size must be positive");
    if (initial >= state_count) throw std::invalid_argument("dfa: initial state out of range");
    if (accepting.size() != state_count)
        throw std::invalid_argument("dfa: accepting flags must cover every state");
    if (delta.size() != static_cast<std::size_t>(state_count) * alphabet_size)
        throw std::invalid_argument("dfa: transition table must be total");
    for (State t : delta)
        if (t >= state_count) throw std::invalid_argument("dfa: transition target out of range");
}

Dfa make_dfa(State state_count, Letter alphabet_size, State initial,
             std::vector<State> accepting_states, std::vector<State> delta) {
    Dfa d;
    d.state_count = state_count;
    d.alphabet_size = alphabet_size;
    d.initial = initial;
    d.accepting.assign(state_count, 0);
    for (State q : accepting_states) {
        if (q >= state_count) throw std::invalid_argument("make_dfa: accepting state out of range");
        d.accepting[q] = 1;
    }
    d.delta = std::move(delta);
    d.validate();
    return d;
}

bool run(const Dfa& dfa, std::span<const Letter> word) {
    State q = dfa.initial;
    for (Letter a : word) {
        if (a >= dfa.alphabet_size) throw std::invalid_argument("run: letter out of range");
        q = dfa.next(q, a);
    }
    return dfa.is_accepting(q);
}

Dfa complement(const Dfa& dfa) {
    Dfa c = dfa;
    for (auto& f : c.accepting) f = f ? 0 : 1;
    return c;
}

Dfa canonicalize(const Dfa& dfa) {
    constexpr State kUnseen = ~State{0};
    std::vector<State> renumber(dfa.state_count, kUnseen);
    std::vector<State> order;
    order.reserve(dfa.state_count);
    renumber[dfa.initial] = 0;
    order.push_back(dfa.initial);
    for (std::size_t i = 0; i < order.size(); ++i) {
        State q = order[i];
        for (Letter a = 0; a < dfa.alphabet_size; ++a) {
            State t = dfa.next(q, a);
            if (renumber[t] == kUnseen) {
                renumber[t] = static_cast<State>(order.size());
                order.push_back(t);
            }
        }
    }
    Dfa out;
    out.state_count = static_cast<State>(order.size());
    out.alphabet_size = dfa.alphabet_size;
    out.initial = 0;
    out.accepting.resize(out.state_count);
    out.delta.resize(static_cast<std::size_t>(out.state_count) * out.alphabet_size);
    for (State nq = 0; nq < out.state_count; ++nq) {
        State old = order[nq];
        out.accepting[nq] = dfa.accepting[old];
        for (Letter a = 0; a < dfa.alphabet_size; ++a)
            out.delta[static_cast<std::size_t>(nq) * out.alphabet_size + a] =
                renumber[dfa.next(old, a)];
    }
    return out;
}

bool isomorphic(const Dfa& a, const Dfa& b) {
    return canonicalize(a) == canonicalize(b);
}

Dfa minimize(const Dfa& dfa) {
    // Restrict to reachable states first.
    constexpr State kUnseen = ~State{0};
    std::vector<State> compact(dfa.state_count, kUnseen);
    std::vector<State> reach;
    compact[dfa.initial] = 0;
    reach.push_back(dfa.initial);
    for (std::size_t i = 0; i < reach.size(); ++i)
        for (Letter a = 0; a < dfa.alphabet_size; ++a) {
            State t = dfa.next(reach[i], a);
            if (compact[t] == kUnseen) {
                compact[t] = static_cast<State>(reach.size());
                reach.push_back(t);
            }
        }
    const State n = static_cast<State>(reach.size());
    const Letter k = dfa.alphabet_size;

    // Moore partition refinement by successor-class signature.
    std::vector<State> cls(n);
    for (State i = 0; i < n; ++i) cls[i] = dfa.accepting[reach[i]] ? 1 : 0;
    State class_count = 2;
    std::vector<State> signature;
    signature.reserve(k + 1);
    for (;;) {
        std::unordered_map<std::string, State> fresh;
        std::vector<State> next_cls(n);
        State next_count = 0;
        for (State i = 0; i < n; ++i) {
            signature.clear();
            signature.push_back(cls[i]);
            for (Letter a = 0; a < k; ++a)
                signature.push_back(cls[compact[dfa.next(reach[i], a)]]);
            std::string key(reinterpret_cast<const char*>(signature.data()),
                            signature.size() * sizeof(State));
            auto [it, inserted] = fresh.emplace(std::move(key), next_count);
            if (inserted) ++next_count;
            next_cls[i] = it->second;
        }
        bool stable = next_count == class_count;
        cls.swap(next_cls);
        class_count = next_count;
        if (stable) break;
    }

    Dfa out;
    out.state_count = class_count;
    out.alphabet_size = k;
    out.initial = cls[0];
    out.accepting.assign(class_count, 0);
    out.delta.assign(static_cast<std::size_t>(class_count) * k, 0);
    for (State i = 0; i < n; ++i) {
        out.accepting[cls[i]] = dfa.accepting[reach[i]];
        for (Letter a = 0; a < k; ++a)
            out.delta[static_cast<std::size_t>(cls[i]) * k + a] =
                cls[compact[dfa.next(reach[i], a)]];
    }
    return canonicalize(out);
}

namespace {

void require_same_alphabet(const Dfa& a, const Dfa& b) {
    if (a.alphabet_size != b.alphabet_size)
        throw std::invalid_argument("alphabet sizes differ");
}

}  // namespace

Dfa symmetric_difference(const Dfa& a, const Dfa& b) {
    require_same_alphabet(a, b);
    const Letter k = a.alphabet_size;
    std::unordered_map<std::uint64_t, State> id;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State qa, State qb) {
        std::uint64_t key = (static_cast<std::uint64_t>(qa) << 32) | qb;
        auto [it, inserted] = id.emplace(key, static_cast<State>(pairs.size()));
        if (inserted) pairs.emplace_back(qa, qb);
        return it->second;
    };
    intern(a.initial, b.initial);
    Dfa out;
    out.alphabet_size = k;
    out.initial = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [qa, qb] = pairs[i];
        out.accepting.push_back(a.is_accepting(qa) != b.is_accepting(qb) ? 1 : 0);
        for (Letter x = 0; x < k; ++x)
            out.delta.push_back(intern(a.next(qa, x), b.next(qb, x)));
    }
    out.state_count = static_cast<State>(pairs.size());
    return out;
}

EquivalenceResult exact_equivalence(const Dfa& a, const Dfa& b) {
    require_same_alphabet(a, b);
    const Letter k = a.alphabet_size;
    // Breadth-first search over reachable state pairs, letters in increasing
    // order, so the first differing pair discovered is reached by the
    // lexicographically smallest among the shortest distinguishing words.
    std::unordered_map<std::uint64_t, std::uint32_t> index_of;
    std::vector<std::pair<State, State>> pairs;
    std::vector<std::pair<std::uint32_t, Letter>> parent;  // (parent index, letter)
    auto key = [](State qa, State qb) {
        return (static_cast<std::uint64_t>(qa) << 32) | qb;
    };
    auto differs = [&](State qa, State qb) { return a.is_accepting(qa) != b.is_accepting(qb); };
    auto word_to = [&](std::uint32_t idx) {
        Word w;
        while (idx != 0) {
            w.push_back(parent[idx].second);
            idx = parent[idx].first;
        }
        std::reverse(w.begin(), w.end());
        return w;
    };

    pairs.emplace_back(a.initial, b.initial);
    parent.emplace_back(0, 0);
    index_of.emplace(key(a.initial, b.initial), 0);
    if (differs(a.initial, b.initial)) return {false, Word{}};
    for (std::uint32_t head = 0; head < pairs.size(); ++head) {
        auto [qa, qb] = pairs[head];
        for (Letter x = 0; x < k; ++x) {
            State ta = a.next(qa, x);
            State tb = b.next(qb, x);
            auto [it, inserted] = index_of.emplace(key(ta, tb), static_cast<std::uint32_t>(pairs.size()));
            if (!inserted) continue;
            pairs.emplace_back(ta, tb);
            parent.emplace_back(head, x);
            if (differs(ta, tb)) return {false, word_to(it->second)};
        }
    }
    return {true, std::nullopt};
}

namespace {

double measure_by_elimination(const Dfa& dfa, double mu) {
    const std::size_t n = dfa.state_count;
    const double c = (1.0 - mu) / dfa.alphabet_size;
    // Row q: m(q) - c * sum_a m(next(q,a)) = mu * [q accepting]
    std::vector<double> m(n * (n + 1), 0.0);
    auto at = [&](std::size_t r, std::size_t col) -> double& { return m[r * (n + 1) + col]; };
    for (std::size_t q = 0; q < n; ++q) {
        at(q, q) += 1.0;
        for (Letter a = 0; a < dfa.alphabet_size; ++a)
            at(q, dfa.next(static_cast<State>(q), a)) -= c;
        at(q, n) = dfa.accepting[q] ? mu : 0.0;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
        if (pivot != col)
            for (std::size_t j = col; j <= n; ++j) std::swap(at(col, j), at(pivot, j));
        double diag = at(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            double factor = at(r, col) / diag;
            if (factor == 0.0) continue;
            for (std::size_t j = col; j <= n; ++j) at(r, j) -= factor * at(col, j);
        }
    }
    std::vector<double> sol(n);
    for (std::size_t r = n; r-- > 0;) {
        double acc = at(r, n);
        for (std::size_t j = r + 1; j < n; ++j) acc -= at(r, j) * sol[j];
        sol[r] = acc / at(r, r);
    }
    return sol[dfa.initial];
}

double measure_by_iteration(const Dfa& dfa, double mu) {
    const std::size_t n = dfa.state_count;
    const double c = (1.0 - mu) / dfa.alphabet_size;
    constexpr double kTolerance = 1e-12;
    std::vector<double> m(n, 0.0), next(n, 0.0);
    // Contraction with factor (1 - mu), so the residual shrinks geometrically.
    std::size_t max_iters =
        static_cast<std::size_t>(std::ceil(std::log(kTolerance) / std::log1p(-mu))) + 64;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        double residual = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            double acc = dfa.accepting[q] ? mu : 0.0;
            const State* row = &dfa.delta[q * dfa.alphabet_size];
            for (Letter a = 0; a < dfa.alphabet_size; ++a) acc += c * m[row[a]];
            next[q] = acc;
            residual = std::max(residual, std::abs(acc - m[q]));
        }
        m.swap(next);
        if (residual <= kTolerance) return m[dfa.initial];
    }
    throw std::runtime_error("exact_measure: fixed-point iteration did not converge");
}

}  // namespace

double exact_measure(const Dfa& dfa, double mu) {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::invalid_argument("exact_measure: mu must lie in (0,1)");
    if (dfa.state_count <= 2000) return measure_by_elimination(dfa, mu);
    return measure_by_iteration(dfa, mu);
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& line, const std::string& what) {
    std::ostringstream msg;
    msg << "dfa parse error at line " << line_no << " (" << what << "): " << line;
    throw std::runtime_error(msg.str());
}

}  // namespace

Dfa read_dfa(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    };

    if (!next_line()) throw std::runtime_error("dfa parse error: empty input");
    Dfa d;
    {
        std::istringstream s(line);
        std::string tag;
        if (!(s >> tag >> d.state_count >> d.alphabet_size >> d.initial) || tag != "dfa")
            parse_fail(line_no, line, "expected 'dfa <states> <alphabet> <initial>'");
    }
    if (!next_line()) parse_fail(line_no, "", "missing 'finals' line");
    {
        std::istringstream s(line);
        std::string tag;
        std::size_t count = 0;
        if (!(s >> tag >> count) || tag != "finals")
            parse_fail(line_no, line, "expected 'finals <k> s1 ... sk'");
        d.accepting.assign(d.state_count, 0);
        for (std::size_t i = 0; i < count; ++i) {
            State q;
            if (!(s >> q)) parse_fail(line_no, line, "too few accepting states");
            if (q >= d.state_count) parse_fail(line_no, line, "accepting state out of range");
            d.accepting[q] = 1;
        }
    }
    d.delta.reserve(static_cast<std::size_t>(d.state_count) * d.alphabet_size);
    for (State q = 0; q < d.state_count; ++q) {
        if (!next_line()) parse_fail(line_no, "", "missing transition row");
        std::istringstream s(line);
        for (Letter a = 0; a < d.alphabet_size; ++a) {
            State t;
            if (!(s >> t)) parse_fail(line_no, line, "short transition row");
            d.delta.push_back(t);
        }
        State extra;
        if (s >> extra) parse_fail(line_no, line, "trailing values in transition row");
    }
    try {
        d.validate();
    } catch (const std::invalid_argument& e) {
        parse_fail(line_no, line, e.what());
    }
    return d;
}

void write_dfa(std::ostream& out, const Dfa& dfa) {
    out << "dfa " << dfa.state_count << ' ' << dfa.alphabet_size << ' ' << dfa.initial << '\n';
    std::vector<State> finals;
    for (State q = 0; q < dfa.state_count; ++q)
        if (dfa.accepting[q]) finals.push_back(q);
    out << "finals " << finals.size();
    for (State q : finals) out << ' ' << q;
    out << '\n';
    for (State q = 0; q < dfa.state_count; ++q) {
        for (Letter a = 0; a < dfa.alphabet_size; ++a) {
            if (a) out << ' ';
            out << dfa.next(q, a);
        }
        out << '\n';
    }
}

Dfa load_dfa(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dfa file: " + path);
    return read_dfa(in);
}

void save_dfa(const std::string& path, const Dfa& dfa) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dfa file: " + path);
    write_dfa(out, dfa);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace noisylearn
