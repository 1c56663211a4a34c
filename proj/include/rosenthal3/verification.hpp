#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rosenthal3/bounds.hpp"
#include "rosenthal3/function_class.hpp"
#include "rosenthal3/mixture.hpp"

namespace rosenthal3 {

inline constexpr double kConditionTol = 1e-12;
inline constexpr std::size_t kMaxSupport = 10000000;

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

// A finite-support law: positive probabilities summing to one (within
// kConditionTol) over distinct finite values.
class AtomicVariable {
  public:
    explicit AtomicVariable(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty())
            throw std::invalid_argument("AtomicVariable: needs at least one atom");
        double total = 0.0;
        for (const Atom& a : atoms_) {
            if (!std::isfinite(a.value))
                throw std::invalid_argument("AtomicVariable: atom values must be finite");
            if (!(std::isfinite(a.prob) && a.prob > 0.0))
                throw std::invalid_argument("AtomicVariable: atom probabilities must be positive");
            total += a.prob;
        }
        if (std::abs(total - 1.0) > kConditionTol)
            throw std::invalid_argument("AtomicVariable: probabilities must sum to one");
        std::vector<double> vals;
        vals.reserve(atoms_.size());
        for (const Atom& a : atoms_) vals.push_back(a.value);
        std::sort(vals.begin(), vals.end());
        for (std::size_t i = 1; i < vals.size(); ++i)
            if (vals[i] == vals[i - 1])
                throw std::invalid_argument("AtomicVariable: atom values must be distinct");
    }

    const std::vector<Atom>& atoms() const { return atoms_; }

    double mean() const {
        double m = 0.0;
        for (const Atom& a : atoms_) m += a.value * a.prob;
        return m;
    }
    double second_moment() const {
        double m = 0.0;
        for (const Atom& a : atoms_) m += a.value * a.value * a.prob;
        return m;
    }
    double plus_third_moment() const {
        double m = 0.0;
        for (const Atom& a : atoms_)
            if (a.value > 0.0) m += a.value * a.value * a.value * a.prob;
        return m;
    }
    double abs_third_moment() const {
        double m = 0.0;
        for (const Atom& a : atoms_) m += std::abs(a.value) * a.value * a.value * a.prob;
        return m;
    }

  private:
    std::vector<Atom> atoms_;
};

struct DistributionSpec {
    std::vector<AtomicVariable> variables;
};

struct ConstraintReport {
    std::vector<double> means;
    double variance_total = 0.0;
    double beta_total = 0.0;
    double abs_third_total = 0.0;
    bool means_nonpositive = false;
    bool variance_ok = false;
    bool beta_ok = false;
    bool satisfies = false;   // the three lines above, jointly
    bool zero_means = false;  // |mean_i| <= kConditionTol for every i
};

// Checks E X_i <= 0, sum E X_i^2 <= 1 and sum E (X_i)_+^3 <= declared_beta,
// each up to kConditionTol.
inline ConstraintReport check_conditions(const DistributionSpec& spec,
                                         double declared_beta) {
    if (spec.variables.empty())
        throw std::invalid_argument("check_conditions: spec has no variables");
    if (!std::isfinite(declared_beta) || declared_beta < 0.0)
        throw std::invalid_argument("check_conditions: declared beta must be finite and nonnegative");
    ConstraintReport r;
    r.means_nonpositive = true;
    r.zero_means = true;
    for (const AtomicVariable& v : spec.variables) {
        const double m = v.mean();
        r.means.push_back(m);
        r.means_nonpositive &= m <= kConditionTol;
        r.zero_means &= std::abs(m) <= kConditionTol;
        r.variance_total += v.second_moment();
        r.beta_total += v.plus_third_moment();
        r.abs_third_total += v.abs_third_moment();
    }
    r.variance_ok = r.variance_total <= 1.0 + kConditionTol;
    r.beta_ok = r.beta_total <= declared_beta + kConditionTol;
    r.satisfies = r.means_nonpositive && r.variance_ok && r.beta_ok;
    return r;
}

namespace detail {

inline std::vector<Atom> merge_equal_atoms(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (!out.empty() && out.back().value == a.value)
            out.back().prob += a.prob;
        else
            out.push_back(a);
    }
    return out;
}

inline bool same_atoms(const AtomicVariable& a, const AtomicVariable& b) {
    if (a.atoms().size() != b.atoms().size()) return false;
    for (std::size_t i = 0; i < a.atoms().size(); ++i)
        if (a.atoms()[i].value != b.atoms()[i].value ||
            a.atoms()[i].prob != b.atoms()[i].prob)
            return false;
    return true;
}

// Distribution of the sum of `count` i.i.d. copies of `atoms` by composition
// enumeration. The multinomial weight is built from running binomial
// coefficients and power products, no log-gamma, so the relative error stays
// at a few ulps per recursion level.
inline void expand_iid_group(const std::vector<Atom>& atoms, std::size_t atom_idx,
                             std::size_t remaining, double prob, double value,
                             std::vector<Atom>& out) {
    if (atom_idx + 1 == atoms.size()) {
        out.push_back({value + double(remaining) * atoms[atom_idx].value,
                       prob * std::pow(atoms[atom_idx].prob, double(remaining))});
        return;
    }
    double comb = 1.0;  // C(remaining, k)
    double pk = 1.0;    // prob^k
    for (std::size_t k = 0; k <= remaining; ++k) {
        expand_iid_group(atoms, atom_idx + 1, remaining - k, prob * comb * pk,
                         value + double(k) * atoms[atom_idx].value, out);
        comb *= double(remaining - k) / double(k + 1);
        pk *= atoms[atom_idx].prob;
    }
}

[[noreturn]] inline void throw_support_overflow(double projected) {
    std::string size = projected > 9e15 ? std::string("more than 9e15")
                                        : std::to_string((long long)(projected));
    throw std::invalid_argument(
        "sum_distribution: projected support size " + size +
        " exceeds the limit of 10000000 outcomes");
}

}  // namespace detail

// Exact law of S = X_1 + ... + X_n as a merged, value-sorted atom list.
// Identical variables (atom lists equal as doubles) are expanded as one
// i.i.d. group via compositions, which keeps near-extremal specs with many
// repeated spikes and fillers at polynomial support size. Rejects anything
// projected past 1e7 outcomes before allocating.
inline std::vector<Atom> sum_distribution(const DistributionSpec& spec) {
    if (spec.variables.empty())
        throw std::invalid_argument("sum_distribution: spec has no variables");

    struct Group {
        const AtomicVariable* var;
        std::size_t count;
    };
    std::vector<Group> groups;
    for (const AtomicVariable& v : spec.variables) {
        bool found = false;
        for (Group& g : groups) {
            if (detail::same_atoms(*g.var, v)) {
                ++g.count;
                found = true;
                break;
            }
        }
        if (!found) groups.push_back({&v, 1});
    }

    double projected = 1.0;
    for (const Group& g : groups) {
        const std::size_t m = g.var->atoms().size();
        double comb = 1.0;  // C(count + m - 1, m - 1) compositions
        for (std::size_t i = 1; i < m; ++i)
            comb *= (double(g.count) + double(i)) / double(i);
        projected *= comb;
        if (projected > double(kMaxSupport)) detail::throw_support_overflow(projected);
    }

    std::vector<Atom> dist{{0.0, 1.0}};
    for (const Group& g : groups) {
        std::vector<Atom> part;
        detail::expand_iid_group(g.var->atoms(), 0, g.count, 1.0, 0.0, part);
        part = detail::merge_equal_atoms(std::move(part));
        if (double(dist.size()) * double(part.size()) > double(kMaxSupport))
            detail::throw_support_overflow(double(dist.size()) * double(part.size()));
        std::vector<Atom> next;
        next.reserve(dist.size() * part.size());
        for (const Atom& a : dist)
            for (const Atom& b : part) next.push_back({a.value + b.value, a.prob * b.prob});
        dist = detail::merge_equal_atoms(std::move(next));
    }
    return dist;
}

// E g(S) summed over the exact law in value order (deterministic rounding).
template <class G>
double exact_expectation_fn(const DistributionSpec& spec, G&& g) {
    double total = 0.0;
    for (const Atom& a : sum_distribution(spec)) total += a.prob * g(a.value);
    return total;
}

inline double exact_expectation(const DistributionSpec& spec, const F3Function& f) {
    return exact_expectation_fn(spec, [&](double s) { return evaluate(f, s); });
}

// Spec with every atom clipped at y (values min(v, y), equal values merged).
inline DistributionSpec truncate_spec(const DistributionSpec& spec, double y) {
    if (!std::isfinite(y))
        throw std::invalid_argument("truncate_spec: y must be finite");
    DistributionSpec out;
    out.variables.reserve(spec.variables.size());
    for (const AtomicVariable& v : spec.variables) {
        std::vector<Atom> atoms = v.atoms();
        for (Atom& a : atoms) a.value = std::min(a.value, y);
        out.variables.emplace_back(detail::merge_equal_atoms(std::move(atoms)));
    }
    return out;
}

inline double exact_expectation_truncated(const DistributionSpec& spec,
                                          const F3Function& f, double y) {
    return exact_expectation(truncate_spec(spec, y), f);
}

namespace detail {

// splitmix64 finalizer; the generator is a pure counter hash so a (seed,
// sample, variable) triple always yields the same uniform on any platform.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    const std::uint64_t h = mix64(mix64(mix64(seed) ^ a) ^ b);
    return double(h >> 11) * 0x1.0p-53;
}

// Stateful counter stream for the generators below.
class SeqRng {
  public:
    explicit SeqRng(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}
    double next() { return uniform01(seed_, stream_, counter_++); }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace detail

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

// Plain Monte Carlo mean of g(S) with inverse-CDF sampling per variable and
// a Welford accumulator. Identical (seed, n) runs reproduce bit for bit.
template <class G>
MonteCarloEstimate monte_carlo_expectation_fn(const DistributionSpec& spec, G&& g,
                                              std::size_t n_samples,
                                              std::uint64_t seed) {
    if (spec.variables.empty())
        throw std::invalid_argument("monte_carlo_expectation: spec has no variables");
    if (n_samples < 100)
        throw std::invalid_argument("monte_carlo_expectation: needs at least 100 samples");

    std::vector<std::vector<double>> cums;
    for (const AtomicVariable& v : spec.variables) {
        std::vector<double> c;
        double run = 0.0;
        for (const Atom& a : v.atoms()) c.push_back(run += a.prob);
        cums.push_back(std::move(c));
    }

    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < spec.variables.size(); ++j) {
            const double u = detail::uniform01(seed, i + 1, j + 1);
            const std::vector<double>& c = cums[j];
            std::size_t idx = 0;
            while (idx + 1 < c.size() && u >= c[idx]) ++idx;
            s += spec.variables[j].atoms()[idx].value;
        }
        const double x = g(s);
        const double d = x - mean;
        mean += d / double(i + 1);
        m2 += d * (x - mean);
    }
    MonteCarloEstimate out;
    out.estimate = mean;
    out.samples = n_samples;
    out.std_error =
        n_samples > 1 ? std::sqrt(m2 / (double(n_samples - 1) * double(n_samples))) : 0.0;
    return out;
}

inline MonteCarloEstimate monte_carlo_expectation(const DistributionSpec& spec,
                                                  const F3Function& f,
                                                  std::size_t n_samples,
                                                  std::uint64_t seed) {
    return monte_carlo_expectation_fn(
        spec, [&](double s) { return evaluate(f, s); }, n_samples, seed);
}

struct GeneratedSpec {
    DistributionSpec spec;
    double achieved_beta = 0.0;
};

namespace detail {

// beta contributed by a zero-mean block with upper atom mass q: decreasing in
// q on (0, 1 - z), range (0, inf), so plain bisection hits any target.
inline double block_beta(double q, double w, double z) {
    const double r0 = 1.0 - z - q;
    return std::pow(w * r0 / (1.0 - z), 1.5) / std::sqrt(q);
}

}  // namespace detail

// Random spec with exactly n_vars variables satisfying the hypotheses, built
// from zero-mean two- and three-point blocks whose upper-atom masses are
// bisected so the positive-part third moments track beta_target, then a
// quarter of the blocks get their negative atom stretched (strictly negative
// mean) and everything is rescaled into the variance budget.
inline GeneratedSpec random_valid_spec(std::uint64_t seed, std::size_t n_vars,
                                       double beta_target) {
    if (n_vars < 1 || n_vars > 12)
        throw std::invalid_argument("random_valid_spec: n_vars must lie in [1, 12]");
    if (!(std::isfinite(beta_target) && beta_target > 0.0))
        throw std::invalid_argument("random_valid_spec: beta_target must be positive");

    detail::SeqRng rng(seed, 0xA11CEULL);

    std::vector<double> share(n_vars);
    double share_total = 0.0;
    for (double& s : share) {
        const double u = rng.next();
        s = 0.05 + 0.95 * u * u;
        share_total += s;
    }
    std::vector<double> bshare(n_vars);
    double bshare_total = 0.0;
    for (double& s : bshare) {
        s = 0.05 + rng.next();
        bshare_total += s;
    }

    std::vector<std::vector<Atom>> blocks(n_vars);
    for (std::size_t i = 0; i < n_vars; ++i) {
        const double w = share[i] / share_total;
        const double target = beta_target * bshare[i] / bshare_total;
        const bool three_point = rng.next() < 0.5;
        const double z = three_point ? 0.1 + 0.5 * rng.next() : 0.0;

        double lo = 1e-9, hi = (1.0 - z) * (1.0 - 1e-9);
        if (target >= detail::block_beta(lo, w, z)) {
            hi = lo;
        } else if (target <= detail::block_beta(hi, w, z)) {
            lo = hi;
        } else {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (detail::block_beta(mid, w, z) > target ? lo : hi) = mid;
            }
        }
        const double q = 0.5 * (lo + hi);
        const double r0 = 1.0 - z - q;
        const double v = std::sqrt(w * r0 / (q * (1.0 - z)));
        double h = v * q / r0;  // zero mean
        if (rng.next() < 0.25) h *= 1.0 + 0.3 * rng.next();  // mean goes negative

        std::vector<Atom> atoms;
        atoms.push_back({-h, r0});
        if (z > 0.0) atoms.push_back({0.0, z});
        atoms.push_back({v, q});
        blocks[i] = std::move(atoms);
    }

    // pull the total second moment inside the unit budget
    for (int pass = 0; pass < 5; ++pass) {
        double total = 0.0;
        for (const std::vector<Atom>& b : blocks)
            for (const Atom& a : b) total += a.value * a.value * a.prob;
        if (total <= 1.0) break;
        const double s = std::sqrt((1.0 - 1e-12) / total);
        for (std::vector<Atom>& b : blocks)
            for (Atom& a : b) a.value *= s;
    }

    GeneratedSpec out;
    for (std::vector<Atom>& b : blocks) out.spec.variables.emplace_back(std::move(b));
    for (const AtomicVariable& v : out.spec.variables)
        out.achieved_beta += v.plus_third_moment();
    return out;
}

struct ExtremalSpec {
    DistributionSpec spec;
    double spike_prob = 0.0;
    double spike_beta = 0.0;
    double filler_beta = 0.0;
    double effective_beta = 0.0;
    double filler_value = 0.0;
    double spike_variance = 0.0;
};

// Near-extremal probe for the cube_plus inequality at x slightly below the
// spike level: n_spikes variables place mass q = beta / (n_spikes y^3) at y
// (zero-mean balanced at -yq/(1-q)), and the remaining variance is spent on
// +/- s fillers with s = min(filler_scale, sqrt(remaining / n_fillers)).
// The fillers' own positive third moments enlarge the effective beta, which
// is reported so callers can verify against the matching bound.
inline ExtremalSpec extremal_spec(double beta, double y, std::size_t n_spikes,
                                  std::size_t n_fillers, double filler_scale) {
    if (!(std::isfinite(beta) && beta > 0.0))
        throw std::invalid_argument("extremal_spec: beta must be positive");
    if (!(std::isfinite(y) && y > beta))
        throw std::invalid_argument("extremal_spec: requires y > beta");
    if (n_spikes < 1 || n_fillers < 1)
        throw std::invalid_argument("extremal_spec: needs at least one spike and one filler");
    if (!(std::isfinite(filler_scale) && filler_scale > 0.0))
        throw std::invalid_argument("extremal_spec: filler_scale must be positive");

    const double q = beta / (double(n_spikes) * y * y * y);
    if (q >= 1.0)
        throw std::invalid_argument("extremal_spec: spike probability reaches one, infeasible");
    const double h = y * q / (1.0 - q);
    const double spike_var = double(n_spikes) * y * y * q / (1.0 - q);
    if (spike_var >= 1.0 - 1e-12)
        throw std::invalid_argument("extremal_spec: spike variance exhausts the unit budget");

    const double remaining = 1.0 - spike_var;
    const double s = std::min(filler_scale, std::sqrt(remaining / double(n_fillers)));

    ExtremalSpec out;
    for (std::size_t i = 0; i < n_spikes; ++i)
        out.spec.variables.emplace_back(std::vector<Atom>{{-h, 1.0 - q}, {y, q}});
    for (std::size_t i = 0; i < n_fillers; ++i)
        out.spec.variables.emplace_back(std::vector<Atom>{{-s, 0.5}, {s, 0.5}});

    out.spike_prob = q;
    out.spike_beta = double(n_spikes) * q * y * y * y;
    out.filler_beta = double(n_fillers) * 0.5 * s * s * s;
    out.filler_value = s;
    out.spike_variance = spike_var;
    for (const AtomicVariable& v : out.spec.variables)
        out.effective_beta += v.plus_third_moment();
    return out;
}

// Zero-mean projection: subtract each variable's mean from its atoms.
inline DistributionSpec center_spec(const DistributionSpec& spec) {
    DistributionSpec out;
    out.variables.reserve(spec.variables.size());
    for (const AtomicVariable& v : spec.variables) {
        const double m = v.mean();
        std::vector<Atom> atoms = v.atoms();
        for (Atom& a : atoms) a.value -= m;
        out.variables.emplace_back(detail::merge_equal_atoms(std::move(atoms)));
    }
    return out;
}

struct VerifyOutcome {
    double exact = 0.0;
    double bound_value = 0.0;
    double margin = 0.0;  // bound - exact
    bool pass = false;    // margin >= -1e-12
};

// Evaluates the exact left side matching bound.inequality_id against the
// bound's value. The spec must satisfy the hypotheses for the beta recorded
// in the bound's parameters; violations are precondition errors, because a
// verification verdict would be meaningless there.
inline VerifyOutcome verify_inequality(const DistributionSpec& spec,
                                       const F3Function& f, const BoundResult& bound) {
    const auto param = [&](const char* key) {
        const auto it = bound.parameters.find(key);
        if (it == bound.parameters.end())
            throw std::invalid_argument(
                std::string("verify_inequality: bound lacks parameter '") + key + "'");
        return it->second;
    };
    // The mixture inequality is a statement about the truncated variables, so
    // its hypothesis gate (and its exact side) use the clipped spec.
    const DistributionSpec* gate_spec = &spec;
    DistributionSpec truncated;
    if (bound.inequality_id == Inequality::mixture) {
        truncated = truncate_spec(spec, param("y"));
        gate_spec = &truncated;
    }
    const ConstraintReport rep = check_conditions(*gate_spec, param("beta"));
    if (!rep.satisfies)
        throw std::invalid_argument(
            "verify_inequality: spec does not satisfy the hypotheses for the declared beta");

    double exact = 0.0;
    switch (bound.inequality_id) {
        case Inequality::theorem:
            exact = exact_expectation(spec, f);
            break;
        case Inequality::cube_plus: {
            const double x = param("x");
            exact = exact_expectation_fn(spec, [x](double s) {
                const double w = std::max(s - x, 0.0);
                return w * w * w;
            });
            break;
        }
        case Inequality::abs_cube: {
            if (!rep.zero_means)
                throw std::invalid_argument("verify_inequality: abs_cube requires zero means");
            const double x = param("x");
            exact = exact_expectation_fn(spec, [x](double s) {
                const double w = std::abs(s - x);
                return w * w * w;
            });
            break;
        }
        case Inequality::corollary: {
            const double p = param("p");
            exact = exact_expectation_fn(
                spec, [p](double s) { return s > 0.0 ? std::pow(s, p) : 0.0; });
            break;
        }
        case Inequality::mean_plus:
            exact = exact_expectation_fn(spec, [](double s) { return std::max(s, 0.0); });
            break;
        case Inequality::mixture:
            exact = exact_expectation(truncated, f);
            break;
    }
    VerifyOutcome out;
    out.exact = exact;
    out.bound_value = bound.value;
    out.margin = bound.value - exact;
    out.pass = out.margin >= -1e-12;
    return out;
}

}  // namespace rosenthal3
