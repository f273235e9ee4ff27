#pragma once

// Computable distributions over the naturals and the two directions linking
// them to terms: reading digits off a term (soundness) and building a term
// from an oracle (completeness).

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "plambda/encodings.hpp"
#include "plambda/smallstep.hpp"

namespace plambda::expr {

/// approx(a, n): the first n binary digits of the probability of a.
/// Consecutive precisions must agree on their common prefix.
using DistOracle = std::function<std::string(std::uint64_t a, std::uint64_t n)>;

inline void require_bits(const std::string& bits, std::uint64_t n) {
    if (bits.size() != n) {
        throw InvariantViolation("oracle returned " + std::to_string(bits.size()) + " digits, expected " + std::to_string(n));
    }
    for (char c : bits) {
        if (c != '0' && c != '1') throw InvariantViolation("oracle returned a non-binary digit string: " + bits);
    }
}

/// Truncated probability of `a` read from the oracle at precision n.
inline Dyadic query(const DistOracle& o, std::uint64_t a, std::uint64_t n) {
    std::string bits = o(a, n);
    require_bits(bits, n);
    return from_binary_digits(bits);
}

inline DistOracle finite_oracle(enc::NatDist d) {
    Dyadic total;
    for (const auto& [a, p] : d) total += p;
    if (total > Dyadic::one()) throw InvariantViolation("distribution mass exceeds 1: " + total.str());
    return [d = std::move(d)](std::uint64_t a, std::uint64_t n) {
        auto it = d.find(a);
        return binary_digits(it == d.end() ? Dyadic::zero() : it->second, n);
    };
}

/// a -> 2^-(a+1)
inline DistOracle geometric_oracle() {
    return [](std::uint64_t a, std::uint64_t n) { return binary_digits(Dyadic::pow2(a + 1), n); };
}

/// Oracle served by an external program speaking the line protocol
/// `a n` -> n-digit bit string. The process lives as long as the oracle.
class SubprocessOracle {
public:
    explicit SubprocessOracle(const std::string& command) : state_(std::make_shared<State>()) {
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0) throw Error("pipe failed");
        if (pipe(from_child) != 0) {
            close(to_child[0]);
            close(to_child[1]);
            throw Error("pipe failed");
        }
        pid_t pid = fork();
        if (pid < 0) throw Error("fork failed");
        if (pid == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        state_->pid = pid;
        state_->in = fdopen(to_child[1], "w");
        state_->out = fdopen(from_child[0], "r");
        if (!state_->in || !state_->out) throw Error("fdopen failed");
    }

    std::string operator()(std::uint64_t a, std::uint64_t n) const {
        State& s = *state_;
        if (std::fprintf(s.in, "%llu %llu\n", static_cast<unsigned long long>(a), static_cast<unsigned long long>(n)) < 0 ||
            std::fflush(s.in) != 0) {
            throw Error("oracle process closed its input");
        }
        std::string line;
        for (int c; (c = std::fgetc(s.out)) != EOF && c != '\n';) line.push_back(static_cast<char>(c));
        if (line.empty() && n > 0) throw Error("oracle process produced no answer for " + std::to_string(a));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        require_bits(line, n);
        return line;
    }

private:
    struct State {
        pid_t pid = -1;
        FILE* in = nullptr;
        FILE* out = nullptr;
        ~State() {
            if (in) std::fclose(in);
            if (out) std::fclose(out);
            if (pid > 0) {
                int status = 0;
                if (waitpid(pid, &status, WNOHANG) == 0) {
                    kill(pid, SIGTERM);
                    waitpid(pid, &status, 0);
                }
            }
        }
    };
    std::shared_ptr<State> state_;
};

// ---------------------------------------------------------------------------
// Soundness: digits of a term's distribution

/// Fuel values tried in turn; each is a prefix of the next run.
struct FuelSchedule {
    std::uint64_t initial = 16;
    std::uint64_t max = std::uint64_t{1} << 14;
};

/// First n digits of the probability that `t` evaluates (call-by-value) to
/// the numeral for `a`, or nullopt when the schedule ends before the pending
/// mass drops below 2^-n.
///
/// The digits are those of lower(a) + residual. The true probability lies in
/// [lower(a), lower(a) + residual] and this upper end is exact whenever the
/// probability itself has at most n digits.
inline std::optional<std::string> soundness_approx(const Term& t, std::uint64_t a, std::uint64_t n, FuelSchedule schedule = {},
                                                   EngineLimits limits = {}) {
    SmallStepEngine engine(t, Strategy::CbV, limits);
    Dyadic threshold = Dyadic::pow2(n);
    std::uint64_t fuel = std::max<std::uint64_t>(schedule.initial, 1);
    for (;;) {
        engine.run_to(std::min(fuel, schedule.max));
        if (engine.residual() < threshold) break;
        if (fuel >= schedule.max) return std::nullopt;
        fuel *= 2;
    }
    for (const auto& [v, m] : engine.lower()) {
        if (!enc::decode_nat(v)) throw NotRepresentableError("value outside the numerals: " + print(v));
    }
    Dyadic upper = engine.lower().at(enc::nat(a)) + engine.residual();
    if (upper > Dyadic::one()) upper = Dyadic::one();
    return binary_digits(upper, n);
}

// ---------------------------------------------------------------------------
// Splitting and completeness

struct SplitResult {
    Term fdt;               ///< finite distribution term for E
    enc::NatDist part;      ///< E, a proper distribution
    DistOracle remainder;   ///< F with D = E/2 + F/2
};

/// Finds E of mass one with E/2 <= D by dovetailing: at stage k, every
/// a < k is queried with k digits until twice the certified mass reaches one.
inline SplitResult split(const DistOracle& o, std::uint64_t budget = 64) {
    for (std::uint64_t k = 1; k <= budget; ++k) {
        std::vector<Dyadic> twice;
        Dyadic total;
        for (std::uint64_t a = 0; a < k; ++a) {
            Dyadic t = query(o, a, k);
            twice.push_back(t + t);
            total += twice.back();
        }
        if (total < Dyadic::one()) continue;
        enc::NatDist part;
        Dyadic acc;
        for (std::uint64_t a = 0; a < k && acc < Dyadic::one(); ++a) {
            Dyadic room = Dyadic::one() - acc;
            Dyadic e = twice[a] < room ? twice[a] : room;
            if (e.is_zero()) continue;
            part[a] = e;
            acc += e;
        }
        Term fdt = enc::fdt_from_dist(part);
        std::uint64_t m = 0;
        for (const auto& [a, e] : part) m = std::max(m, e.exponent());
        DistOracle rest = [o, part, m](std::uint64_t a, std::uint64_t n) {
            // F = 2D - E; D read with one extra digit gives F exactly truncated
            std::uint64_t p = std::max(n, m);
            Dyadic d = query(o, a, p + 1);
            auto it = part.find(a);
            Dyadic e = it == part.end() ? Dyadic::zero() : it->second;
            BigInt fp = d.scaled_floor(p + 1) - e.scaled_floor(p);
            if (fp < 0) throw InvariantViolation("oracle digits are not prefix-consistent at " + std::to_string(a));
            BigInt digits = fp >> static_cast<unsigned>(p - n);
            BigInt cap = (BigInt(1) << static_cast<unsigned>(n)) - 1;
            if (digits > cap) digits = cap;
            return binary_digits(Dyadic(digits, n), n);
        };
        return SplitResult{std::move(fdt), std::move(part), std::move(rest)};
    }
    throw ResourceLimitError("split: no certified mass within " + std::to_string(budget) + " stages");
}

struct Completion {
    Term term;
    Dyadic guarantee;               ///< lower bound on the total mass of the term's semantics
    std::vector<enc::NatDist> parts;  ///< E_1 .. E_rounds
};

/// After r rounds the term is
///   T_1 = ((λs. MFDT L_1) ⊕ (λs. T_2)) (λs.s),  ...,  T_{r+1} = Ω
/// with L_i the tree of the i-th split. Its semantics is Σ 2^-i E_i <= D and
/// has mass 1 - 2^-r.
inline Completion completeness_approx(const DistOracle& o, std::uint64_t rounds, std::uint64_t budget = 64) {
    Completion out;
    std::vector<Term> trees;
    DistOracle cur = o;
    for (std::uint64_t i = 0; i < rounds; ++i) {
        SplitResult s = split(cur, budget);
        trees.push_back(s.fdt);
        out.parts.push_back(std::move(s.part));
        cur = std::move(s.remainder);
    }
    Term t = enc::omega();
    Term mfdt = enc::mfdt();
    Term id = lam("s", var("s"));
    for (auto it = trees.rbegin(); it != trees.rend(); ++it) {
        Term now = Term::abs("s", app(mfdt, *it));
        Term later = Term::abs("s", t);
        t = app(choice(now, later), id);
    }
    out.term = t;
    out.guarantee = Dyadic::one() - Dyadic::pow2(rounds);
    return out;
}

}  // namespace plambda::expr
