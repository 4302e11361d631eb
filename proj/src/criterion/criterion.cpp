#include "levypos/criterion.hpp"

#include "levypos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace levypos {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Least-squares slope of log|v| against log x over [first, xs.size()); NaN if fewer than
// three usable points.
double loglog_slope(std::span<const double> xs, std::span<const double> vs, std::size_t first) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = first; i < xs.size(); ++i) {
        const double v = std::abs(vs[i]);
        if (!(v > 0.0) || !std::isfinite(v)) {
            continue;
        }
        const double lx = std::log(xs[i]);
        const double ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 3) {
        return kNaN;
    }
    const double den = n * sxx - sx * sx;
    if (std::abs(den) < 1e-12 * n * sxx) {
        return kNaN;
    }
    return (n * sxy - sx * sy) / den;
}

struct Trend {
    std::optional<bool> diverges;
    double slope = kNaN;
    double envelope_slope = kNaN;
};

// Upward divergence of r along the (decreasing) grid: running maximum above r_max and
// still climbing with log-log slope at most -s_min over the tail half.
Trend upward_trend(std::span<const double> xs, std::span<const double> r, double r_max, double s_min) {
    Trend t;
    const std::size_t n = xs.size();
    std::vector<double> env(n, kNaN);
    double running = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isnan(r[i])) {
            running = std::max(running, r[i]);
        }
        env[i] = running;
    }
    const std::size_t half = n / 2;
    t.slope = loglog_slope(xs, r, half);
    std::vector<double> positive_env(env);
    for (auto& v : positive_env) {
        if (!(v > 0.0)) {
            v = kNaN;
        }
    }
    t.envelope_slope = loglog_slope(xs, positive_env, half);
    const double last = env.back();
    if (std::isnan(last) || last == -kInf) {
        return t;
    }
    if (last == kInf) {
        t.diverges = true;
        return t;
    }
    if (last <= r_max) {
        t.diverges = false;
        return t;
    }
    if (!std::isnan(t.envelope_slope) && t.envelope_slope <= -s_min) {
        t.diverges = true;
    }
    return t;
}

// Divergence of the whole tail (not just a subsequence): every value in the final
// quarter above r_max and still rising.
std::optional<bool> full_limit_trend(std::span<const double> xs, std::span<const double> r,
                                     double r_max, double s_min) {
    const std::size_t first = xs.size() - std::max<std::size_t>(3, xs.size() / 4);
    double lowest = kInf;
    for (std::size_t i = first; i < xs.size(); ++i) {
        if (std::isnan(r[i])) {
            return std::nullopt;
        }
        lowest = std::min(lowest, r[i]);
    }
    if (lowest <= r_max) {
        return false;
    }
    if (lowest == kInf) {
        return true;
    }
    const double slope = loglog_slope(xs, r, first);
    if (!std::isnan(slope) && slope <= -s_min) {
        return true;
    }
    return std::nullopt;
}

std::string flag_text(std::optional<bool> b) {
    if (!b) {
        return "unknown";
    }
    return *b ? "true" : "false";
}

bool same_flags(const ConditionFlags& a, const ConditionFlags& b) {
    return a.limit_inf == b.limit_inf && a.limsup_inf == b.limsup_inf &&
           a.limsup_shifted_inf == b.limsup_shifted_inf && a.liminf_plus_finite == b.liminf_plus_finite &&
           a.limsup_minus_finite == b.limsup_minus_finite;
}

std::vector<double> subordinator_grid() {
    auto g = dyadic_grid(0, 40);
    g.insert(g.begin(), {8.0, 4.0, 2.0});
    return g;
}
}  // namespace

double guarded_ratio(double A, double denominator) {
    if (denominator > 0.0) {
        return A / denominator;
    }
    if (A > 0.0) {
        return kInf;
    }
    if (A < 0.0) {
        return -kInf;
    }
    return kNaN;
}

std::vector<RatioSample> ratio_table(const LevyModel& m, std::span<const double> x_grid) {
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        if (!(x_grid[i] < x_grid[i - 1])) {
            throw DomainError("ratio grid must be strictly decreasing");
        }
    }
    std::vector<RatioSample> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        const Functionals f = functionals(m, x);
        const double den_minus = std::sqrt(f.U * f.tail_minus);
        const double den_plus = std::sqrt(f.U * f.tail_plus);
        out.push_back({x, guarded_ratio(f.A, den_minus), guarded_ratio(f.A, den_plus),
                       f.A / (1.0 + den_minus)});
    }
    return out;
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::TendsPositive: return "TendsPositive";
    case Verdict::SubsequencePositive: return "SubsequencePositive";
    case Verdict::LinearSubsequenceDivergence: return "LinearSubsequenceDivergence";
    case Verdict::StaysTwoSided: return "StaysTwoSided";
    case Verdict::StaysNonNegativeSide: return "StaysNonNegativeSide";
    case Verdict::StaysNonPositiveSide: return "StaysNonPositiveSide";
    case Verdict::SpectrallyPositiveSubordinator: return "SpectrallyPositiveSubordinator";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

Verdict verdict_from_flags(std::optional<bool> positive, std::optional<bool> negative,
                           const ConditionFlags& flags) {
    if (positive == true) {
        if (flags.limit_inf == true) {
            return Verdict::TendsPositive;
        }
        if (flags.limsup_shifted_inf == true) {
            return Verdict::LinearSubsequenceDivergence;
        }
        return Verdict::SubsequencePositive;
    }
    if (positive == false) {
        return negative == false ? Verdict::StaysTwoSided : Verdict::StaysNonPositiveSide;
    }
    return negative == false ? Verdict::StaysNonNegativeSide : Verdict::Inconclusive;
}

SubordinatorCheck subordinator_check(const LevyModel& m, std::span<const double> grid) {
    if (activity(m, Side::Minus) != Activity::Zero) {
        throw PreconditionError("subordinator_check needs a vanishing negative tail");
    }
    SubordinatorCheck c;
    c.sigma_zero = m.sigma2 == 0.0;
    double integral = kInf;
    try {
        integral = tail_integral_from_zero(m.tail_plus, 1.0);
        c.bv = std::isfinite(integral);
    } catch (const NumericError&) {
        c.bv = false;
    }
    const double scale = 1.0 + std::abs(m.gamma) + m.tail_plus(1.0) + (c.bv ? integral : 0.0);
    const double tol = 1e-9 * scale;
    c.drift = c.bv ? m.gamma + m.tail_plus(1.0) - integral : kNaN;
    c.drift_nonneg = c.bv && c.drift >= -tol;
    c.A_nonneg = true;
    for (double x : grid) {
        if (winsorised_mean(m, x) < -tol) {
            c.A_nonneg = false;
            break;
        }
    }
    c.is_subordinator = c.sigma_zero && c.bv && c.drift_nonneg && c.A_nonneg;
    return c;
}

SubordinatorCheck subordinator_check(const LevyModel& m) {
    const auto g = subordinator_grid();
    return subordinator_check(m, g);
}

LimitEstimate estimate_A0(const LevyModel& m, std::span<const double> grid) {
    LimitEstimate e;
    if (grid.size() < 4) {
        e.value = grid.empty() ? kNaN : winsorised_mean(m, grid.back());
        e.band = kInf;
        return e;
    }
    const std::size_t n = grid.size();
    double a[4];
    for (int i = 0; i < 4; ++i) {
        a[i] = winsorised_mean(m, grid[n - 4 + static_cast<std::size_t>(i)]);
    }
    auto extrapolate = [](double p0, double p1, double p2, double& out) {
        const double e1 = p0 - p1;
        const double e2 = p1 - p2;
        if (e1 == 0.0 && e2 == 0.0) {
            out = p2;
            return true;
        }
        if (e1 == 0.0) {
            return false;
        }
        const double q = e2 / e1;
        if (!(q > 0.0 && q < 1.0)) {
            return false;
        }
        out = p2 - e2 * q / (1.0 - q);
        return true;
    };
    double late = 0.0;
    double early = 0.0;
    const bool ok_late = extrapolate(a[1], a[2], a[3], late);
    const bool ok_early = extrapolate(a[0], a[1], a[2], early);
    if (ok_late && ok_early) {
        e.value = late;
        e.band = std::abs(late - early) + 1e-12 * (1.0 + std::abs(late));
        e.converged = true;
    } else {
        e.value = a[3];
        e.band = kInf;
    }
    return e;
}

CriterionReport classify(const LevyModel& m, const ClassifyConfig& cfg) {
    CriterionReport rep;
    rep.label = m.label;
    rep.config = cfg;
    {
        std::ostringstream os;
        os << "limsup detection is heuristic: running extremum beyond R_max=" << cfg.r_max
           << " with log-log slope <= -" << cfg.s_min << " over the tail half of x=2^-j, j="
           << cfg.j_min << ".." << cfg.j_max;
        rep.notes.push_back(os.str());
    }

    const ValidationReport vr = validate_model(m);
    if (vr.status == ValidationStatus::Reject) {
        throw ValidationError("model '" + m.label + "' rejected: " + vr.summary());
    }
    if (vr.status == ValidationStatus::AnalyticOnly) {
        // Pure Gaussian with drift: X_t/sqrt(t) tends to N(0, sigma2).
        rep.flags.limsup_inf = false;
        rep.flags.limit_inf = false;
        rep.flags.limsup_shifted_inf = false;
        rep.flags.limsup_minus_finite = true;
        rep.flags.liminf_plus_finite = true;
        rep.heuristic_verdict = Verdict::StaysTwoSided;
        rep.verdict = Verdict::StaysTwoSided;
        rep.A0 = {m.gamma, 0.0, true};
        rep.notes.push_back("no jumps: Gaussian model classified analytically");
        return rep;
    }

    if (cfg.j_max - cfg.j_min + 1 < cfg.min_points) {
        rep.notes.push_back("grid too short: need at least " + std::to_string(cfg.min_points) + " points");
        rep.verdict = Verdict::Inconclusive;
        rep.heuristic_verdict = Verdict::Inconclusive;
        return rep;
    }
    const auto grid = dyadic_grid(cfg.j_min, cfg.j_max);
    rep.ratios = ratio_table(m, grid);
    rep.A0 = estimate_A0(m, grid);

    std::vector<double> rm, rp, rs;
    for (const auto& r : rep.ratios) {
        rm.push_back(r.ratio_minus);
        rp.push_back(r.ratio_plus);
        rs.push_back(r.ratio_minus_shifted);
    }

    const Activity minus_act = activity(m, Side::Minus);
    const Activity plus_act = activity(m, Side::Plus);
    std::optional<bool> positive;
    std::optional<bool> negative;

    if (minus_act == Activity::Zero) {
        rep.subordinator = subordinator_check(m, grid);
        positive = rep.subordinator->is_subordinator;
    } else {
        const Trend up = upward_trend(grid, rm, cfg.r_max, cfg.s_min);
        const Trend shifted = upward_trend(grid, rs, cfg.r_max, cfg.s_min);
        rep.slopes.ratio_minus = up.slope;
        rep.slopes.ratio_minus_envelope = up.envelope_slope;
        rep.slopes.ratio_minus_shifted = shifted.slope;
        rep.slopes.ratio_minus_shifted_envelope = shifted.envelope_slope;
        rep.flags.limsup_inf = up.diverges;
        rep.flags.limsup_shifted_inf = shifted.diverges;
        if (up.diverges == true) {
            rep.flags.limit_inf = full_limit_trend(grid, rm, cfg.r_max, cfg.s_min);
        } else if (up.diverges == false) {
            rep.flags.limit_inf = false;
        }
        if (up.diverges) {
            rep.flags.limsup_minus_finite = !*up.diverges;
        }
        positive = up.diverges;
        if (m.sigma2 > 0.0) {
            rep.notes.push_back("sigma2 > 0 with a non-vanishing negative tail: positive verdicts "
                                "are excluded since A(x)/sqrt(tail_minus(x)) stays bounded");
            positive = false;
            rep.flags.limsup_inf = false;
            rep.flags.limit_inf = false;
            rep.flags.limsup_shifted_inf = false;
            rep.flags.limsup_minus_finite = true;
        }
    }

    if (plus_act == Activity::Zero) {
        rep.negative_subordinator = subordinator_check(mirror(m), grid);
        negative = rep.negative_subordinator->is_subordinator;
    } else {
        std::vector<double> neg(rp.size());
        std::transform(rp.begin(), rp.end(), neg.begin(), [](double v) { return -v; });
        const Trend down = upward_trend(grid, neg, cfg.r_max, cfg.s_min);
        rep.slopes.ratio_plus = down.slope;
        rep.slopes.ratio_plus_envelope = down.envelope_slope;
        if (down.diverges) {
            rep.flags.liminf_plus_finite = !*down.diverges;
        }
        negative = down.diverges;
        if (m.sigma2 > 0.0) {
            negative = false;
            rep.flags.liminf_plus_finite = true;
        }
    }

    if (minus_act == Activity::Zero && positive == true) {
        rep.heuristic_verdict = Verdict::SpectrallyPositiveSubordinator;
    } else {
        rep.heuristic_verdict = verdict_from_flags(positive, negative, rep.flags);
    }
    rep.verdict = rep.heuristic_verdict;

    if (cfg.consult_oracle) {
        if (auto o = analytic_oracle(m)) {
            rep.oracle_verdict = o->verdict;
            rep.oracle_flags = o->flags;
            rep.oracle_agrees = o->verdict == rep.heuristic_verdict;
            rep.notes.push_back("analytic asymptote: " + o->reason);
            if (!rep.oracle_agrees) {
                rep.verdict = Verdict::Inconclusive;
                rep.notes.push_back("heuristic verdict " + std::string(to_string(rep.heuristic_verdict)) +
                                    " disagrees with the analytic verdict " +
                                    std::string(to_string(o->verdict)));
            } else if (!same_flags(o->flags, rep.flags)) {
                rep.notes.push_back("verdicts agree but some condition flags differ (heuristic limsup=" +
                                    flag_text(rep.flags.limsup_inf) + ", analytic limsup=" +
                                    flag_text(o->flags.limsup_inf) + ")");
            }
        }
    }
    return rep;
}

WitnessSequence witness_sequence(const LevyModel& m, std::span<const double> x_k) {
    WitnessSequence w;
    for (std::size_t k = 0; k < x_k.size(); ++k) {
        const double x = x_k[k];
        if (k > 0 && !(x < x_k[k - 1])) {
            throw DomainError("witness x_k must be strictly decreasing (k=" + std::to_string(k) + ")");
        }
        const Functionals f = functionals(m, x);
        if (!(f.A > 0.0)) {
            std::ostringstream os;
            os << "witness sequence needs A(x_k) > 0; A(x_" << k << ")=" << f.A << " at x=" << x;
            throw PreconditionError(os.str());
        }
        if (!(f.tail_minus > 0.0)) {
            std::ostringstream os;
            os << "witness sequence needs a positive negative tail; it vanishes at x_" << k << "=" << x;
            throw PreconditionError(os.str());
        }
        const double s = std::sqrt(f.U / (f.tail_minus * f.A * f.A));
        const double t = std::sqrt(s / f.tail_minus);
        w.x.push_back(x);
        w.s.push_back(s);
        w.t.push_back(t);
        w.A.push_back(f.A);
        w.t_tail_minus.push_back(t * f.tail_minus);
        w.u_over_ta2.push_back(f.U / (t * f.A * f.A));
        w.ta_over_x.push_back(t * f.A / x);
    }
    bool trends = !w.x.empty();
    bool a_up = !w.x.empty();
    for (std::size_t k = 1; k < w.x.size(); ++k) {
        trends = trends && w.t_tail_minus[k] < w.t_tail_minus[k - 1] &&
                 w.u_over_ta2[k] < w.u_over_ta2[k - 1] && w.ta_over_x[k] > w.ta_over_x[k - 1];
        a_up = a_up && w.A[k] > w.A[k - 1];
    }
    w.trends_hold = trends;
    w.A_increasing = a_up;
    return w;
}

}  // namespace levypos
