#include "levypos/criterion.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace levypos {

// Small-x asymptotes of the power-tail family (tails exact powers on (0,1]).
// With c = c+ - c-, s = c+ + c-:
//   A(x) = gamma + c (x^(1-a) - a)/(1-a)  (a != 1),   gamma + c (1 + log x)  (a = 1)
//   U(x) = sigma2 + 2 s x^(2-a)/(2-a)
// so with sigma2 = 0, sqrt(U tail_minus) = K x^(1-a) with K = sqrt(2 s c- / (2-a)).
std::optional<OracleResult> analytic_oracle(const LevyModel& m) {
    if (!m.power) {
        return std::nullopt;
    }
    const double a = m.power->alpha;
    const double cp = m.power->c_plus;
    const double cm = m.power->c_minus;
    if (!(a > 0.0 && a < 2.0)) {
        return std::nullopt;
    }
    if (cp == 0.0 && cm == 0.0) {
        return std::nullopt;
    }
    const double c = cp - cm;
    const bool gaussian = m.sigma2 > 0.0;
    const double A0 = a < 1.0 ? m.gamma - c * a / (1.0 - a) : std::numeric_limits<double>::quiet_NaN();
    const double tol = 1e-12 * (1.0 + std::abs(m.gamma) + std::abs(c));

    OracleResult r;
    r.A0 = A0;
    std::ostringstream why;
    why << "alpha=" << a << ", c+=" << cp << ", c-=" << cm << ", gamma=" << m.gamma
        << ", sigma2=" << m.sigma2 << "; ";

    bool positive = false;
    if (cm > 0.0) {
        bool up = false;
        bool shifted = false;
        if (gaussian) {
            why << "sigma2 > 0 keeps both ratios bounded";
        } else if (a < 1.0) {
            up = A0 > tol;
            why << "A(0+)=" << A0 << (up ? " > 0 against a vanishing denominator"
                                         : " <= 0 so the minus ratio stays bounded above");
        } else if (a == 1.0) {
            up = c < 0.0;
            shifted = up;
            why << (up ? "A grows like log(1/x) over a constant denominator"
                       : "A does not grow; the minus ratio stays bounded above");
        } else {
            why << "A and the denominator both scale as x^(1-alpha); ratios converge";
        }
        r.flags.limsup_inf = up;
        r.flags.limit_inf = up;
        r.flags.limsup_shifted_inf = shifted;
        r.flags.limsup_minus_finite = !up;
        positive = up;
    } else {
        const bool sub = !gaussian && a < 1.0 && A0 >= -tol;
        why << (sub ? "spectrally positive with drift A(0+)=" : "spectrally positive, not a subordinator (");
        if (sub) {
            why << A0;
        } else {
            why << (gaussian ? "sigma2 > 0" : a >= 1.0 ? "unbounded variation" : "negative drift") << ")";
        }
        positive = sub;
    }

    bool negative = false;
    if (cp > 0.0) {
        bool down = false;
        if (gaussian) {
            down = false;
        } else if (a < 1.0) {
            down = A0 < -tol;
        } else if (a == 1.0) {
            down = c > 0.0;
        }
        r.flags.liminf_plus_finite = !down;
        negative = down;
    } else {
        negative = !gaussian && a < 1.0 && A0 <= tol;
    }
    why << "; negative side " << (negative ? "diverges" : "stays bounded");

    r.positive = positive;
    r.negative = negative;
    if (cm == 0.0 && positive) {
        r.verdict = Verdict::SpectrallyPositiveSubordinator;
    } else {
        r.verdict = verdict_from_flags(positive, negative, r.flags);
    }
    r.reason = why.str();
    return r;
}

}  // namespace levypos
