#include "levypos/simulator.hpp"

#include "levypos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace levypos {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool is_bounded_variation(const TailFunction& tail) {
    if (tail.is_zero()) {
        return true;
    }
    try {
        return std::isfinite(tail_integral_from_zero(tail, 1.0));
    } catch (const NumericError&) {
        return false;
    }
}

// int_(0, x] y Pi(dy) = int_0^x tail - x tail(x).
double first_moment_to(const TailFunction& tail, double x) {
    if (tail.is_zero()) {
        return 0.0;
    }
    return tail_integral_from_zero(tail, x) - x * tail(x);
}

double sub_variance(const LevyModel& m, const std::array<bool, 2>& active, double eps) {
    double v = 0.0;
    if (active[0]) {
        v += side_second_moment(m.tail_plus, eps);
    }
    if (active[1]) {
        v += side_second_moment(m.tail_minus, eps);
    }
    return v;
}

double band_rate(const TailFunction& tail, double t, double eps, double h) {
    return t * (tail(eps) - tail(h));
}

// Largest epsilon in [lo, hi] with pred(epsilon) true, assuming pred holds on a lower set.
template <typename Pred>
double largest_with(Pred pred, double lo, double hi) {
    double a = std::log(lo);
    double b = std::log(hi);
    for (int i = 0; i < 200 && b - a > 1e-10; ++i) {
        const double mid = 0.5 * (a + b);
        if (pred(std::exp(mid))) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return std::exp(a);
}

double invert_tail(const TailFunction& tail, double y, double lo, double hi) {
    if (tail.has_inverse()) {
        return std::clamp(tail.inverse(y), lo, hi);
    }
    if (!std::isfinite(hi)) {
        hi = std::max(2.0 * lo, 1.0);
        int guard = 0;
        while (tail(hi) > y) {
            hi *= 2.0;
            if (++guard > 2000 || !std::isfinite(hi)) {
                throw NumericError("inverse-tail bisection failure: no upper bracket for y=" +
                                   fmt(y));
            }
        }
    }
    double a = std::log(lo);
    double b = std::log(hi);
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (a + b);
        if (tail(std::exp(mid)) > y) {
            a = mid;
        } else {
            b = mid;
        }
    }
    const double x = std::exp(b);
    if (!std::isfinite(x)) {
        throw NumericError("inverse-tail bisection failure", lo, hi);
    }
    return x;
}

long long poisson_count(double mean, RandomStream& stream) {
    if (mean <= 0.0) {
        return 0;
    }
    std::poisson_distribution<long long> dist(mean);
    return dist(stream);
}

struct SideDraw {
    double sum = 0.0;
    double max_jump = 0.0;
};

// Raw sum of band and big jumps of one side plus the sub-epsilon surrogate.
SideDraw draw_side(const TailFunction& tail, const SidePlan& sp, double eps, bool big,
                   RandomStream& stream) {
    SideDraw d;
    if (!sp.active) {
        return d;
    }
    const long long n_band = poisson_count(sp.band_rate, stream);
    for (long long i = 0; i < n_band; ++i) {
        const double y = sp.tail_h + stream.uniform() * (sp.tail_eps - sp.tail_h);
        const double x = invert_tail(tail, y, eps, sp.h);
        d.sum += x;
        d.max_jump = std::max(d.max_jump, x);
    }
    if (big) {
        const long long n_big = poisson_count(sp.big_rate, stream);
        for (long long i = 0; i < n_big; ++i) {
            const double y = stream.uniform() * sp.tail_h;
            const double x =
                invert_tail(tail, y, sp.h, std::numeric_limits<double>::infinity());
            d.sum += x;
            d.max_jump = std::max(d.max_jump, x);
        }
    }
    if (sp.sub_cutoff == SubCutoff::Gaussian) {
        std::normal_distribution<double> g;
        d.sum += sp.sub_sd * g(stream);
    }
    return d;
}

SidePlan plan_side(const TailFunction& tail, double t, double eps, double h, bool bv,
                   const SimConfig& cfg) {
    SidePlan sp;
    sp.active = true;
    sp.h = h;
    sp.bounded_variation = bv;
    sp.tail_eps = tail(eps);
    sp.tail_h = tail(h);
    sp.band_rate = t * (sp.tail_eps - sp.tail_h);
    sp.big_rate = t * sp.tail_h;
    sp.sub_sd = std::sqrt(t * std::max(0.0, side_second_moment(tail, eps)));
    sp.sub_cutoff = (cfg.gaussian_surrogate && !bv) ? SubCutoff::Gaussian : SubCutoff::Dropped;
    for (const double rate : {sp.band_rate, sp.big_rate}) {
        if (rate > cfg.max_poisson_mean) {
            throw NumericError("Poisson mean " + fmt(rate) + " exceeds " +
                               fmt(cfg.max_poisson_mean) + " at t=" + fmt(t) +
                               "; use a larger h or a smaller t");
        }
    }
    return sp;
}

// Epsilon meeting the surrogate target, raised if needed to respect the band-rate budget.
double choose_epsilon(const LevyModel& m, double t, const SimConfig& cfg,
                      const std::array<bool, 2>& active, double& ratio, bool& target_met) {
    const double h_min = std::min(active[0] ? cfg.h_plus : 1.0, active[1] ? cfg.h_minus : 1.0);
    const auto ratio_at = [&](double eps) {
        const double var = t * (m.sigma2 + sub_variance(m, active, eps));
        return var > 0.0 ? eps / std::sqrt(var) : std::numeric_limits<double>::infinity();
    };
    const auto within_budget = [&](double eps) {
        double worst = 0.0;
        if (active[0]) {
            worst = std::max(worst, band_rate(m.tail_plus, t, eps, cfg.h_plus));
        }
        if (active[1]) {
            worst = std::max(worst, band_rate(m.tail_minus, t, eps, cfg.h_minus));
        }
        return worst <= cfg.max_band_rate;
    };

    double eps = cfg.epsilon;
    if (eps <= 0.0) {
        const double hi = 0.5 * h_min;
        const double lo = 1e-200;
        if (ratio_at(hi) <= cfg.surrogate_target) {
            eps = hi;
        } else {
            eps = largest_with([&](double e) { return ratio_at(e) <= cfg.surrogate_target; }, lo,
                               hi);
        }
        if (!within_budget(eps)) {
            if (!within_budget(hi)) {
                throw NumericError("band-rate budget " + fmt(cfg.max_band_rate) +
                                   " cannot be met below h at t=" + fmt(t) +
                                   "; use a larger h or a smaller t");
            }
            // The smallest epsilon within budget: bisect on the complement.
            double a = std::log(eps);
            double b = std::log(hi);
            for (int i = 0; i < 200 && b - a > 1e-10; ++i) {
                const double mid = 0.5 * (a + b);
                if (within_budget(std::exp(mid))) {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            eps = std::exp(b);
        }
    }
    ratio = ratio_at(eps);
    target_met = ratio <= cfg.surrogate_target;
    return eps;
}

std::array<bool, 2> active_sides(const LevyModel& m) {
    return {!m.tail_plus.is_zero(), !m.tail_minus.is_zero()};
}

template <typename Fill>
void run_parallel(std::size_t n, unsigned workers, Fill fill) {
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(
                                                           1, n / 64))));
    if (workers == 1) {
        fill(std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(n, w * chunk);
            const std::size_t end = std::min(n, begin + chunk);
            threads.emplace_back([&, w, begin, end] {
                try {
                    fill(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace

std::string_view to_string(SubCutoff s) {
    switch (s) {
    case SubCutoff::None:
        return "none";
    case SubCutoff::Gaussian:
        return "gaussian";
    case SubCutoff::Dropped:
        return "dropped";
    }
    return "none";
}

void SimConfig::validate() const {
    if (!(h_plus > 0.0 && h_plus <= 1.0) || !(h_minus > 0.0 && h_minus <= 1.0)) {
        throw PreconditionError("truncation levels must lie in (0, 1], got h+=" + fmt(h_plus) +
                                ", h-=" + fmt(h_minus));
    }
    if (epsilon < 0.0 || (epsilon > 0.0 && !(epsilon < std::min(h_plus, h_minus)))) {
        throw PreconditionError("epsilon must lie in (0, min(h+, h-)), got " + fmt(epsilon));
    }
    if (n_samples < 100) {
        throw PreconditionError("n_samples must be at least 100");
    }
    for (const double t : t_values) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw PreconditionError("t values must be positive, got " + fmt(t));
        }
    }
    if (!(surrogate_target > 0.0) || !(max_band_rate > 0.0) || !(max_poisson_mean > 0.0)) {
        throw PreconditionError("surrogate target and rate budgets must be positive");
    }
}

SamplerPlan make_plan(const LevyModel& m, double t, const SimConfig& cfg) {
    cfg.validate();
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("t must be positive, got " + fmt(t));
    }
    SamplerPlan plan;
    plan.t = t;
    plan.gauss_sd = std::sqrt(m.sigma2 * t);
    if (m.jump_free()) {
        if (!(m.sigma2 > 0.0)) {
            throw PreconditionError("model " + m.label + " has neither jumps nor a Gaussian part");
        }
        plan.analytic_gaussian = true;
        plan.drift = m.gamma * t;
        return plan;
    }
    require_valid(m);

    const auto active = active_sides(m);
    plan.epsilon =
        choose_epsilon(m, t, cfg, active, plan.surrogate_ratio, plan.surrogate_target_met);

    const bool bv_plus = is_bounded_variation(m.tail_plus);
    const bool bv_minus = is_bounded_variation(m.tail_minus);
    if (active[0]) {
        plan.sides[0] = plan_side(m.tail_plus, t, plan.epsilon, cfg.h_plus, bv_plus, cfg);
    }
    if (active[1]) {
        plan.sides[1] = plan_side(m.tail_minus, t, plan.epsilon, cfg.h_minus, bv_minus, cfg);
    }

    if (bv_plus && bv_minus) {
        // Drift of the bounded-variation representation, computed without cancellation
        // against the jump compensators so that subordinators stay exactly positive.
        const double i_plus = first_moment_to(m.tail_plus, 1.0);
        const double i_minus = first_moment_to(m.tail_minus, 1.0);
        double d = m.gamma - i_plus + i_minus;
        if (std::abs(d) <= 1e-9 * std::max({1.0, std::abs(m.gamma), i_plus, i_minus})) {
            d = 0.0;
        }
        plan.drift = t * (d + first_moment_to(m.tail_plus, plan.epsilon) -
                          first_moment_to(m.tail_minus, plan.epsilon));
    } else {
        plan.drift = t * (m.gamma - band_first_moment(m.tail_plus, plan.epsilon, 1.0) +
                          band_first_moment(m.tail_minus, plan.epsilon, 1.0));
    }
    return plan;
}

IncrementSample sample_increment(const LevyModel& m, const SamplerPlan& plan,
                                 RandomStream& stream) {
    IncrementSample s;
    double x = plan.drift;
    if (plan.gauss_sd > 0.0) {
        std::normal_distribution<double> g;
        x += plan.gauss_sd * g(stream);
    }
    if (!plan.analytic_gaussian) {
        const SideDraw up = draw_side(m.tail_plus, plan.sides[0], plan.epsilon, true, stream);
        const SideDraw down = draw_side(m.tail_minus, plan.sides[1], plan.epsilon, true, stream);
        x += up.sum - down.sum;
        s.max_jump_plus = up.max_jump;
        s.max_jump_minus = down.max_jump;
    }
    s.x_t = x;
    return s;
}

IncrementSample sample_increment(const LevyModel& m, double t, const SimConfig& cfg,
                                 RandomStream& stream) {
    return sample_increment(m, make_plan(m, t, cfg), stream);
}

unsigned resolve_workers(const SimConfig& cfg) {
    if (cfg.workers > 0) {
        return cfg.workers;
    }
    if (const char* env = std::getenv("LEVYPOS_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(std::min(v, 1024L));
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

SampleBatch simulate_batch(const LevyModel& m, double t, const SimConfig& cfg) {
    SampleBatch batch;
    batch.plan = make_plan(m, t, cfg);
    batch.samples.resize(cfg.n_samples);
    run_parallel(cfg.n_samples, resolve_workers(cfg), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RandomStream stream = make_stream(cfg.master_seed, i);
            batch.samples[i] = sample_increment(m, batch.plan, stream);
        }
    });
    return batch;
}

std::vector<double> simulate_small_jumps(const LevyModel& m, Side side, double d, double t,
                                         const SimConfig& cfg) {
    cfg.validate();
    if (!(d > 0.0) || !(t > 0.0)) {
        throw DomainError("small-jump component needs d > 0 and t > 0");
    }
    std::vector<double> out(cfg.n_samples, 0.0);
    const TailFunction& tail = m.tail(side);
    if (tail.is_zero() || side_second_moment(tail, d) <= 0.0) {
        return out;
    }
    // One-sided copy of the model so epsilon is chosen from this side alone.
    LevyModel one = m;
    one.sigma2 = 0.0;
    (side == Side::Plus ? one.tail_minus : one.tail_plus) = TailFunction::zero();
    SimConfig c = cfg;
    c.h_plus = c.h_minus = std::min(d, 1.0);
    std::array<bool, 2> active{side == Side::Plus, side == Side::Minus};
    double ratio = 0.0;
    bool met = true;
    const double eps = choose_epsilon(one, t, c, active, ratio, met);
    const SidePlan sp =
        plan_side(tail, t, eps, std::min(d, 1.0), is_bounded_variation(tail), c);
    // Jumps in (1, d] when d > 1 are handled as a second band.
    SidePlan upper;
    if (d > 1.0) {
        upper = plan_side(tail, t, 1.0, d, true, c);
        upper.sub_cutoff = SubCutoff::None;
    }
    const double compensator = t * band_first_moment(tail, eps, d);
    run_parallel(cfg.n_samples, resolve_workers(cfg), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RandomStream stream = make_stream(cfg.master_seed, i);
            double v = draw_side(tail, sp, eps, false, stream).sum;
            if (upper.active) {
                v += draw_side(tail, upper, 1.0, false, stream).sum;
            }
            out[i] = v - compensator;
        }
    });
    return out;
}

Estimate wilson_estimate(std::size_t successes, std::size_t n, double z) {
    Estimate e;
    e.n = n;
    e.successes = successes;
    if (n == 0) {
        e.ci_high = 1.0;
        return e;
    }
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    e.p_hat = p;
    e.ci_low = std::clamp(std::min(centre - half, p), 0.0, 1.0);
    e.ci_high = std::clamp(std::max(centre + half, p), 0.0, 1.0);
    return e;
}

Estimate positive_fraction(std::span<const IncrementSample> samples) {
    const auto k = static_cast<std::size_t>(std::count_if(
        samples.begin(), samples.end(), [](const IncrementSample& s) { return s.x_t >= 0.0; }));
    return wilson_estimate(k, samples.size());
}

Estimate ratio_fraction(std::span<const IncrementSample> samples, double M, double epsilon) {
    const auto k = static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [&](const IncrementSample& s) {
            return M > 0.0 ? s.x_t > M * std::max(s.max_jump_minus, epsilon) : s.x_t >= 0.0;
        }));
    return wilson_estimate(k, samples.size());
}

Estimate linear_fraction(std::span<const IncrementSample> samples, double M, double t) {
    const auto k = static_cast<std::size_t>(std::count_if(
        samples.begin(), samples.end(), [&](const IncrementSample& s) { return s.x_t > M * t; }));
    return wilson_estimate(k, samples.size());
}

Estimate estimate_positive_prob(const LevyModel& m, double t, const SimConfig& cfg) {
    const SampleBatch b = simulate_batch(m, t, cfg);
    return positive_fraction(b.samples);
}

Estimate estimate_ratio_divergence(const LevyModel& m, double t, double M, const SimConfig& cfg) {
    if (m.tail_minus.is_zero() || activity(m, Side::Minus) == Activity::Zero) {
        throw PreconditionError("ratio to the largest negative jump needs a nonzero negative tail (" +
                                m.label + ")");
    }
    if (M < 0.0) {
        throw DomainError("M must be non-negative");
    }
    const SampleBatch b = simulate_batch(m, t, cfg);
    return ratio_fraction(b.samples, M, b.plan.epsilon);
}

Estimate estimate_linear_divergence(const LevyModel& m, double t, double M, const SimConfig& cfg) {
    const SampleBatch b = simulate_batch(m, t, cfg);
    return linear_fraction(b.samples, M, t);
}

}  // namespace levypos
