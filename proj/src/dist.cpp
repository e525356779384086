#include "ggnlab/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/special_functions/gamma.hpp>

namespace ggnlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
    if (!cond) throw Error(msg);
}

Eigen::MatrixXd subgenerator_matrix(const DistributionSpec& s) {
    const int d = static_cast<int>(s.entry.size());
    Eigen::MatrixXd t(d, d);
    for (int i = 0; i < d; i++)
        for (int j = 0; j < d; j++) t(i, j) = s.generator[i][j];
    return t;
}

Eigen::VectorXd entry_vector(const DistributionSpec& s) {
    const int d = static_cast<int>(s.entry.size());
    Eigen::VectorXd a(d);
    for (int i = 0; i < d; i++) a(i) = s.entry[i];
    return a;
}

// tau = (-T)^{-1} 1: expected time to absorption from each phase.
Eigen::VectorXd absorption_vector(const DistributionSpec& s) {
    Eigen::MatrixXd neg_t = -subgenerator_matrix(s);
    return neg_t.partialPivLu().solve(Eigen::VectorXd::Ones(neg_t.rows()));
}

double ph_tail(const DistributionSpec& s, double t) {
    if (t <= 0.0) return 1.0;
    Eigen::MatrixXd m = (subgenerator_matrix(s) * t).exp();
    double v = entry_vector(s).transpose() * m * Eigen::VectorXd::Ones(m.rows());
    return std::clamp(v, 0.0, 1.0);
}

double ph_mean_residual(const DistributionSpec& s, double t) {
    Eigen::VectorXd tau = absorption_vector(s);
    Eigen::MatrixXd m = (subgenerator_matrix(s) * std::max(t, 0.0)).exp();
    Eigen::RowVectorXd p = entry_vector(s).transpose() * m;
    const double alive = p.sum();
    if (alive <= 0.0) throw QueryBeyondSupport("phase-type tail vanished numerically");
    return (p * tau).value() / alive;
}

// Marsaglia-Tsang rejection sampler for gamma(shape, 1). The boost quantile
// is ~30x slower, which matters at 1e7 events per run; it stays in use for
// the cold-path equilibrium inversion.
double gamma_standard(RandomStream& g, double shape) {
    if (shape < 1.0) {
        const double u = g.uniform();
        return gamma_standard(g, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        const double x = g.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = g.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// Adaptive Simpson quadrature.
double simpson_step(const std::function<double(double)>& f, double a, double fa,
                    double b, double fb, double m, double fm, double whole,
                    double eps, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, eps * 0.5, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, eps * 0.5, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, fa, b, fb, m, fm, whole, eps, 48);
}

// gcd with tolerance; valid because b - (a mod b) = -a mod b shares the gcd.
double float_gcd(double a, double b, double tol) {
    a = std::abs(a);
    b = std::abs(b);
    if (a < b) std::swap(a, b);
    while (b > tol) {
        double r = std::fmod(a, b);
        r = std::min(r, b - r);
        a = b;
        b = r;
    }
    return a;
}

double essential_sup(const DistributionSpec& s) {
    switch (s.family) {
        case Family::Deterministic: return s.value;
        case Family::UniformInterval: return s.hi;
        case Family::BoundedEmpirical: return s.samples.back();
        default: return kInf;
    }
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::Exponential: return "exponential";
        case Family::Gamma: return "gamma";
        case Family::Deterministic: return "deterministic";
        case Family::UniformInterval: return "uniform";
        case Family::HyperExponential: return "hyperexponential";
        case Family::Erlang: return "erlang";
        case Family::PhaseType: return "phase_type";
        case Family::BoundedEmpirical: return "bounded_empirical";
    }
    return "?";
}

DistributionSpec DistributionSpec::exponential(double rate) {
    require(rate > 0.0, "exponential: rate must be > 0");
    DistributionSpec s;
    s.family = Family::Exponential;
    s.rate = rate;
    return s;
}

DistributionSpec DistributionSpec::gamma(double shape, double scale) {
    require(shape > 0.0 && scale > 0.0, "gamma: shape and scale must be > 0");
    DistributionSpec s;
    s.family = Family::Gamma;
    s.shape = shape;
    s.scale = scale;
    return s;
}

DistributionSpec DistributionSpec::deterministic(double value) {
    require(value > 0.0, "deterministic: value must be > 0");
    DistributionSpec s;
    s.family = Family::Deterministic;
    s.value = value;
    return s;
}

DistributionSpec DistributionSpec::uniform_interval(double lo, double hi) {
    require(lo >= 0.0 && hi > lo, "uniform: need 0 <= lo < hi");
    DistributionSpec s;
    s.family = Family::UniformInterval;
    s.lo = lo;
    s.hi = hi;
    return s;
}

DistributionSpec DistributionSpec::hyperexponential(std::vector<double> weights,
                                                    std::vector<double> rates) {
    require(!weights.empty() && weights.size() == rates.size(),
            "hyperexponential: weights and rates must have equal nonzero size");
    double wsum = 0.0;
    for (size_t i = 0; i < weights.size(); i++) {
        require(weights[i] > 0.0, "hyperexponential: weights must be > 0");
        require(rates[i] > 0.0, "hyperexponential: rates must be > 0");
        wsum += weights[i];
    }
    require(std::abs(wsum - 1.0) <= 1e-12, "hyperexponential: weights must sum to 1");
    DistributionSpec s;
    s.family = Family::HyperExponential;
    s.weights = std::move(weights);
    s.rates = std::move(rates);
    return s;
}

DistributionSpec DistributionSpec::erlang(int stages, double rate) {
    require(stages >= 1 && rate > 0.0, "erlang: need stages >= 1 and rate > 0");
    DistributionSpec s;
    s.family = Family::Erlang;
    s.stages = stages;
    s.rate = rate;
    return s;
}

DistributionSpec DistributionSpec::phase_type(std::vector<double> entry,
                                              std::vector<std::vector<double>> generator) {
    const size_t d = entry.size();
    require(d >= 1 && generator.size() == d, "phase_type: entry/generator size mismatch");
    double esum = 0.0;
    for (double e : entry) {
        require(e >= 0.0, "phase_type: entry probabilities must be >= 0");
        esum += e;
    }
    require(std::abs(esum - 1.0) <= 1e-12, "phase_type: entry must sum to 1");
    for (size_t i = 0; i < d; i++) {
        require(generator[i].size() == d, "phase_type: generator must be square");
        double row = 0.0;
        for (size_t j = 0; j < d; j++) {
            if (i == j)
                require(generator[i][j] < 0.0, "phase_type: diagonal must be < 0");
            else
                require(generator[i][j] >= 0.0, "phase_type: off-diagonal must be >= 0");
            row += generator[i][j];
        }
        require(row <= 1e-12, "phase_type: row sums must be <= 0");
    }
    DistributionSpec s;
    s.family = Family::PhaseType;
    s.entry = std::move(entry);
    s.generator = std::move(generator);
    // reject defective generators up front
    Eigen::VectorXd tau = absorption_vector(s);
    for (int i = 0; i < tau.size(); i++)
        require(std::isfinite(tau(i)) && tau(i) > 0.0,
                "phase_type: generator must lead to absorption");
    return s;
}

DistributionSpec DistributionSpec::bounded_empirical(std::vector<double> samples) {
    require(!samples.empty(), "bounded_empirical: need at least one sample");
    for (double v : samples) require(v > 0.0, "bounded_empirical: samples must be > 0");
    std::sort(samples.begin(), samples.end());
    DistributionSpec s;
    s.family = Family::BoundedEmpirical;
    s.samples = std::move(samples);
    return s;
}

double sample(const DistributionSpec& spec, RandomStream& stream) {
    switch (spec.family) {
        case Family::Exponential:
            return stream.exponential(spec.rate);
        case Family::Gamma:
            return spec.scale * gamma_standard(stream, spec.shape);
        case Family::Deterministic:
            return spec.value;
        case Family::UniformInterval:
            return spec.lo + (spec.hi - spec.lo) * stream.uniform();
        case Family::HyperExponential: {
            double u = stream.uniform();
            size_t k = 0;
            for (; k + 1 < spec.weights.size(); k++) {
                if (u < spec.weights[k]) break;
                u -= spec.weights[k];
            }
            return stream.exponential(spec.rates[k]);
        }
        case Family::Erlang: {
            double total = 0.0;
            for (int i = 0; i < spec.stages; i++) total += stream.exponential(spec.rate);
            return total;
        }
        case Family::PhaseType: {
            const size_t d = spec.entry.size();
            double u = stream.uniform();
            size_t k = 0;
            for (; k + 1 < d; k++) {
                if (u < spec.entry[k]) break;
                u -= spec.entry[k];
            }
            double total = 0.0;
            for (;;) {
                const double exit_rate = -spec.generator[k][k];
                total += stream.exponential(exit_rate);
                double pick = stream.uniform() * exit_rate;
                size_t next = d;  // d means absorbed
                for (size_t j = 0; j < d; j++) {
                    if (j == k) continue;
                    if (pick < spec.generator[k][j]) {
                        next = j;
                        break;
                    }
                    pick -= spec.generator[k][j];
                }
                if (next == d) return total;
                k = next;
            }
        }
        case Family::BoundedEmpirical: {
            const size_t m = spec.samples.size();
            size_t idx = std::min(m - 1, static_cast<size_t>(stream.uniform() * m));
            return spec.samples[idx];
        }
    }
    return 0.0;
}

MomentSummary moments(const DistributionSpec& spec) {
    MomentSummary out;
    switch (spec.family) {
        case Family::Exponential:
            out.mean = 1.0 / spec.rate;
            out.second_moment = 2.0 / (spec.rate * spec.rate);
            break;
        case Family::Gamma:
            out.mean = spec.shape * spec.scale;
            out.second_moment = spec.scale * spec.scale * spec.shape * (spec.shape + 1.0);
            break;
        case Family::Deterministic:
            out.mean = spec.value;
            out.second_moment = spec.value * spec.value;
            break;
        case Family::UniformInterval:
            out.mean = 0.5 * (spec.lo + spec.hi);
            out.second_moment =
                (spec.lo * spec.lo + spec.lo * spec.hi + spec.hi * spec.hi) / 3.0;
            break;
        case Family::HyperExponential:
            for (size_t i = 0; i < spec.weights.size(); i++) {
                out.mean += spec.weights[i] / spec.rates[i];
                out.second_moment += 2.0 * spec.weights[i] / (spec.rates[i] * spec.rates[i]);
            }
            break;
        case Family::Erlang:
            out.mean = spec.stages / spec.rate;
            out.second_moment = spec.stages * (spec.stages + 1.0) / (spec.rate * spec.rate);
            break;
        case Family::PhaseType: {
            Eigen::VectorXd tau = absorption_vector(spec);
            Eigen::MatrixXd neg_t = -subgenerator_matrix(spec);
            Eigen::VectorXd tau2 = neg_t.partialPivLu().solve(tau);
            out.mean = entry_vector(spec).dot(tau);
            out.second_moment = 2.0 * entry_vector(spec).dot(tau2);
            break;
        }
        case Family::BoundedEmpirical: {
            double s1 = 0.0, s2 = 0.0;
            for (double v : spec.samples) {
                s1 += v;
                s2 += v * v;
            }
            out.mean = s1 / spec.samples.size();
            out.second_moment = s2 / spec.samples.size();
            break;
        }
    }
    out.variance = std::max(0.0, out.second_moment - out.mean * out.mean);
    out.scv = out.variance / (out.mean * out.mean);
    return out;
}

double tail_probability(const DistributionSpec& spec, double t) {
    if (t <= 0.0) return 1.0;
    switch (spec.family) {
        case Family::Exponential:
            return std::exp(-spec.rate * t);
        case Family::Gamma:
            return boost::math::gamma_q(spec.shape, t / spec.scale);
        case Family::Deterministic:
            return t <= spec.value ? 1.0 : 0.0;
        case Family::UniformInterval:
            if (t <= spec.lo) return 1.0;
            if (t >= spec.hi) return 0.0;
            return (spec.hi - t) / (spec.hi - spec.lo);
        case Family::HyperExponential: {
            double p = 0.0;
            for (size_t i = 0; i < spec.weights.size(); i++)
                p += spec.weights[i] * std::exp(-spec.rates[i] * t);
            return p;
        }
        case Family::Erlang:
            return boost::math::gamma_q(static_cast<double>(spec.stages), spec.rate * t);
        case Family::PhaseType:
            return ph_tail(spec, t);
        case Family::BoundedEmpirical: {
            auto it = std::lower_bound(spec.samples.begin(), spec.samples.end(), t);
            return static_cast<double>(spec.samples.end() - it) / spec.samples.size();
        }
    }
    return 0.0;
}

double mean_residual(const DistributionSpec& spec, double t) {
    require(t >= 0.0, "mean_residual: t must be >= 0");
    if (t > essential_sup(spec))
        throw QueryBeyondSupport("mean_residual: t beyond the support");
    switch (spec.family) {
        case Family::Exponential:
            return 1.0 / spec.rate;
        case Family::Gamma: {
            const double x = t / spec.scale;
            const double qa = boost::math::gamma_q(spec.shape, x);
            if (qa < 1e-290) return spec.scale;  // tail limit of the gamma family
            const double qa1 = boost::math::gamma_q(spec.shape + 1.0, x);
            return spec.shape * spec.scale * qa1 / qa - t;
        }
        case Family::Deterministic:
            return spec.value - t;
        case Family::UniformInterval:
            if (t <= spec.lo) return 0.5 * (spec.lo + spec.hi) - t;
            return 0.5 * (spec.hi - t);
        case Family::HyperExponential: {
            // factor out the slowest rate so both sums stay in range for large t
            const double rmin = *std::min_element(spec.rates.begin(), spec.rates.end());
            double num = 0.0, den = 0.0;
            for (size_t i = 0; i < spec.weights.size(); i++) {
                const double w = spec.weights[i] * std::exp(-(spec.rates[i] - rmin) * t);
                num += w / spec.rates[i];
                den += w;
            }
            return num / den;
        }
        case Family::Erlang: {
            const double x = spec.rate * t;
            const double k = spec.stages;
            const double qa = boost::math::gamma_q(k, x);
            if (qa < 1e-290) return 1.0 / spec.rate;
            const double qa1 = boost::math::gamma_q(k + 1.0, x);
            return k / spec.rate * qa1 / qa - t;
        }
        case Family::PhaseType:
            return ph_mean_residual(spec, t);
        case Family::BoundedEmpirical: {
            auto it = std::lower_bound(spec.samples.begin(), spec.samples.end(), t);
            if (it == spec.samples.end())
                throw QueryBeyondSupport("mean_residual: t beyond the support");
            double acc = 0.0;
            for (auto p = it; p != spec.samples.end(); ++p) acc += *p - t;
            return acc / static_cast<double>(spec.samples.end() - it);
        }
    }
    return 0.0;
}

double mean_residual_numeric(const DistributionSpec& spec, double t) {
    require(t >= 0.0, "mean_residual_numeric: t must be >= 0");
    if (t > essential_sup(spec))
        throw QueryBeyondSupport("mean_residual_numeric: t beyond the support");
    const double pt = tail_probability(spec, t);
    if (pt <= 0.0) return 0.0;
    const double upper = std::min(essential_sup(spec), quantile(spec, 1.0 - 1e-13));
    if (upper <= t) return 0.0;
    auto f = [&](double u) { return tail_probability(spec, u); };
    const double integral = integrate(f, t, upper, 1e-10 * pt * std::max(1.0, upper - t));
    return integral / pt;
}

ResidualProfile residual_profile(const DistributionSpec& spec) {
    ResidualProfile out;
    const MomentSummary m = moments(spec);
    switch (spec.family) {
        case Family::Exponential:
            out.r_sup = out.r_inf = m.mean;
            return out;
        case Family::Gamma:
            // mean residual moves monotonically from the mean to the scale
            out.r_sup = std::max(m.mean, spec.scale);
            out.r_inf = std::min(m.mean, spec.scale);
            return out;
        case Family::Deterministic:
            out.r_sup = spec.value;
            out.r_inf = 0.0;
            return out;
        case Family::UniformInterval:
            out.r_sup = m.mean;
            out.r_inf = 0.0;
            return out;
        case Family::HyperExponential:
            // decreasing failure rate: sup is the tail limit, inf is at age 0
            out.r_sup = 1.0 / *std::min_element(spec.rates.begin(), spec.rates.end());
            out.r_inf = m.mean;
            return out;
        case Family::Erlang:
            out.r_sup = m.mean;
            out.r_inf = 1.0 / spec.rate;
            return out;
        case Family::PhaseType: {
            // envelope over phases: the conditional residual is a convex
            // combination of per-phase absorption times
            Eigen::VectorXd tau = absorption_vector(spec);
            out.r_sup = tau.maxCoeff();
            out.r_inf = tau.minCoeff();
            return out;
        }
        case Family::BoundedEmpirical: {
            // candidate suprema: age 0 and just past each atom
            double best = m.mean;
            const auto& v = spec.samples;
            for (size_t i = 0; i < v.size(); i++) {
                if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
                double acc = 0.0;
                size_t cnt = 0;
                for (size_t j = i + 1; j < v.size(); j++) {
                    acc += v[j] - v[i];
                    cnt++;
                }
                if (cnt > 0) best = std::max(best, acc / cnt);
            }
            out.r_sup = best;
            out.r_inf = 0.0;
            return out;
        }
    }
    return out;
}

ResidualProfile residual_profile_numeric(const DistributionSpec& spec) {
    ResidualProfile out;
    out.method = ProfileMethod::Numeric;
    const double mean = moments(spec).mean;
    const double sup = essential_sup(spec);
    const double upper = std::min(sup, quantile(spec, 1.0 - 1e-9));
    double lo_m = kInf, hi_m = -kInf;
    auto probe = [&](double t) {
        if (t > sup) return;
        const double v = mean_residual(spec, t);
        lo_m = std::min(lo_m, v);
        hi_m = std::max(hi_m, v);
    };
    probe(0.0);
    double t = mean / 1000.0;
    for (int k = 0; k < 2000 && t <= upper; k++, t *= 1.05) probe(t);
    probe(upper);
    if (sup == kInf) probe(quantile(spec, 1.0 - 1e-12));  // tail extrapolation probe
    out.r_sup = hi_m;
    out.r_inf = lo_m;
    return out;
}

DistributionSpec unitize(const DistributionSpec& spec) {
    const double m = moments(spec).mean;
    switch (spec.family) {
        case Family::Exponential:
            return DistributionSpec::exponential(1.0);
        case Family::Gamma:
            return DistributionSpec::gamma(spec.shape, 1.0 / spec.shape);
        case Family::Deterministic:
            return DistributionSpec::deterministic(1.0);
        case Family::UniformInterval:
            return DistributionSpec::uniform_interval(spec.lo / m, spec.hi / m);
        case Family::HyperExponential: {
            std::vector<double> r = spec.rates;
            for (double& x : r) x *= m;
            return DistributionSpec::hyperexponential(spec.weights, std::move(r));
        }
        case Family::Erlang:
            return DistributionSpec::erlang(spec.stages, static_cast<double>(spec.stages));
        case Family::PhaseType: {
            auto g = spec.generator;
            for (auto& row : g)
                for (double& x : row) x *= m;
            return DistributionSpec::phase_type(spec.entry, std::move(g));
        }
        case Family::BoundedEmpirical: {
            std::vector<double> v = spec.samples;
            for (double& x : v) x /= m;
            return DistributionSpec::bounded_empirical(std::move(v));
        }
    }
    return spec;
}

bool is_lattice(const DistributionSpec& spec) {
    switch (spec.family) {
        case Family::Deterministic:
            return true;
        case Family::BoundedEmpirical: {
            const double tol = 1e-9;
            double g = spec.samples[0];
            for (double v : spec.samples) g = float_gcd(g, v, tol);
            if (g <= tol) return false;
            for (double v : spec.samples) {
                const double k = std::round(v / g);
                if (std::abs(v - k * g) > tol) return false;
            }
            return true;
        }
        default:
            return false;  // continuous support
    }
}

double quantile(const DistributionSpec& spec, double p) {
    require(p > 0.0 && p < 1.0, "quantile: p must be in (0,1)");
    switch (spec.family) {
        case Family::Exponential:
            return -std::log1p(-p) / spec.rate;
        case Family::Gamma:
            return spec.scale * boost::math::gamma_p_inv(spec.shape, p);
        case Family::Deterministic:
            return spec.value;
        case Family::UniformInterval:
            return spec.lo + p * (spec.hi - spec.lo);
        case Family::Erlang:
            return boost::math::gamma_p_inv(static_cast<double>(spec.stages), p) / spec.rate;
        case Family::BoundedEmpirical: {
            const size_t m = spec.samples.size();
            size_t idx = std::min(m - 1, static_cast<size_t>(p * m));
            return spec.samples[idx];
        }
        case Family::HyperExponential:
        case Family::PhaseType: {
            const double target = 1.0 - p;
            double hi = moments(spec).mean;
            while (tail_probability(spec, hi) > target) hi *= 2.0;
            double lo = 0.0;
            for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(1.0, hi); it++) {
                const double mid = 0.5 * (lo + hi);
                (tail_probability(spec, mid) > target ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return 0.0;
}

double equilibrium_sample(const DistributionSpec& spec, RandomStream& stream) {
    switch (spec.family) {
        case Family::Exponential:
            return stream.exponential(spec.rate);  // memoryless
        case Family::Deterministic:
            return spec.value * stream.uniform();
        case Family::UniformInterval: {
            const double a = spec.lo, b = spec.hi;
            const double x = stream.uniform() * 0.5 * (a + b);
            if (x <= a) return x;
            const double s = (b - a) * (b - a) - 2.0 * (b - a) * (x - a);
            return b - std::sqrt(std::max(0.0, s));
        }
        case Family::Erlang: {
            // equilibrium of a k-stage law: uniform stage count, then that many stages
            const int j = 1 + std::min(spec.stages - 1,
                                       static_cast<int>(stream.uniform() * spec.stages));
            double total = 0.0;
            for (int i = 0; i < j; i++) total += stream.exponential(spec.rate);
            return total;
        }
        case Family::HyperExponential: {
            const double mean = moments(spec).mean;
            double u = stream.uniform();
            size_t k = 0;
            for (; k + 1 < spec.weights.size(); k++) {
                const double w = spec.weights[k] / (spec.rates[k] * mean);
                if (u < w) break;
                u -= w;
            }
            return stream.exponential(spec.rates[k]);
        }
        case Family::PhaseType: {
            // excess of a phase-type law is phase-type with a tilted entry vector
            Eigen::MatrixXd neg_t = -subgenerator_matrix(spec);
            Eigen::RowVectorXd beta =
                entry_vector(spec).transpose() * neg_t.inverse();
            beta /= beta.sum();
            std::vector<double> entry(beta.data(), beta.data() + beta.size());
            for (double& e : entry) e = std::max(0.0, e);
            DistributionSpec excess =
                DistributionSpec::phase_type(std::move(entry), spec.generator);
            return sample(excess, stream);
        }
        case Family::BoundedEmpirical: {
            // size-biased atom, then uniform age within it
            double total = std::accumulate(spec.samples.begin(), spec.samples.end(), 0.0);
            double u = stream.uniform() * total;
            for (double v : spec.samples) {
                if (u < v) return v * stream.uniform();
                u -= v;
            }
            return spec.samples.back() * stream.uniform();
        }
        case Family::Gamma: {
            // invert the equilibrium CDF numerically (cold path: init draws only)
            const double alpha = spec.shape, theta = spec.scale;
            const double mean = alpha * theta;
            const double p = stream.uniform();
            auto cdf = [&](double t) {
                const double excess = mean * boost::math::gamma_q(alpha + 1.0, t / theta) -
                                      t * boost::math::gamma_q(alpha, t / theta);
                return 1.0 - excess / mean;
            };
            double hi = mean;
            while (cdf(hi) < p) hi *= 2.0;
            double lo = 0.0;
            for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); it++) {
                const double mid = 0.5 * (lo + hi);
                (cdf(mid) < p ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return 0.0;
}

double fractional_moment(const DistributionSpec& spec, double p) {
    require(p > 0.0, "fractional_moment: p must be > 0");
    switch (spec.family) {
        case Family::Exponential:
            return boost::math::tgamma(1.0 + p) / std::pow(spec.rate, p);
        case Family::Gamma:
            return std::pow(spec.scale, p) *
                   boost::math::tgamma_ratio(spec.shape + p, spec.shape);
        case Family::Erlang:
            return boost::math::tgamma_ratio(spec.stages + p,
                                             static_cast<double>(spec.stages)) /
                   std::pow(spec.rate, p);
        case Family::Deterministic:
            return std::pow(spec.value, p);
        case Family::UniformInterval:
            return (std::pow(spec.hi, p + 1.0) - std::pow(spec.lo, p + 1.0)) /
                   ((p + 1.0) * (spec.hi - spec.lo));
        case Family::HyperExponential: {
            double acc = 0.0;
            for (size_t i = 0; i < spec.weights.size(); i++)
                acc += spec.weights[i] * boost::math::tgamma(1.0 + p) /
                       std::pow(spec.rates[i], p);
            return acc;
        }
        case Family::BoundedEmpirical: {
            double acc = 0.0;
            for (double v : spec.samples) acc += std::pow(v, p);
            return acc / spec.samples.size();
        }
        case Family::PhaseType: {
            // E[V^p] = p * int t^{p-1} P(V>t) dt
            const double upper = quantile(spec, 1.0 - 1e-12);
            auto f = [&](double t) {
                return std::pow(t, p - 1.0) * tail_probability(spec, t);
            };
            return p * integrate(f, 0.0, upper, 1e-8);
        }
    }
    return 0.0;
}

std::vector<double> phase_absorption_times(const DistributionSpec& spec) {
    require(spec.family == Family::PhaseType, "phase_absorption_times: not a phase type");
    Eigen::VectorXd tau = absorption_vector(spec);
    return std::vector<double>(tau.data(), tau.data() + tau.size());
}

std::string describe(const DistributionSpec& spec) {
    char buf[160];
    auto num = [](double v) {
        char b[40];
        std::snprintf(b, sizeof b, "%g", v);
        return std::string(b);
    };
    std::string out = std::string("family = \"") + family_name(spec.family) + "\"";
    switch (spec.family) {
        case Family::Exponential:
            std::snprintf(buf, sizeof buf, ", rate = %g", spec.rate);
            return out + buf;
        case Family::Gamma:
            std::snprintf(buf, sizeof buf, ", shape = %g, scale = %g", spec.shape, spec.scale);
            return out + buf;
        case Family::Deterministic:
            std::snprintf(buf, sizeof buf, ", value = %g", spec.value);
            return out + buf;
        case Family::UniformInterval:
            std::snprintf(buf, sizeof buf, ", lo = %g, hi = %g", spec.lo, spec.hi);
            return out + buf;
        case Family::Erlang:
            std::snprintf(buf, sizeof buf, ", stages = %d, rate = %g", spec.stages, spec.rate);
            return out + buf;
        case Family::HyperExponential: {
            out += ", weights = [";
            for (size_t i = 0; i < spec.weights.size(); i++)
                out += (i ? ", " : "") + num(spec.weights[i]);
            out += "], rates = [";
            for (size_t i = 0; i < spec.rates.size(); i++)
                out += (i ? ", " : "") + num(spec.rates[i]);
            return out + "]";
        }
        case Family::PhaseType: {
            out += ", phases = " + num(static_cast<double>(spec.entry.size()));
            return out;
        }
        case Family::BoundedEmpirical: {
            out += ", samples = " + num(static_cast<double>(spec.samples.size())) +
                   " points in [" + num(spec.samples.front()) + ", " +
                   num(spec.samples.back()) + "]";
            return out;
        }
    }
    return out;
}

}  // namespace ggnlab
