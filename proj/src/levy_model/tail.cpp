#include "levypos/tail.hpp"

#include "levypos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace levypos {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TailFunction::TailFunction(Fn value) : value_(std::move(value)) {}

TailFunction& TailFunction::with_density(Fn density) {
    density_ = std::move(density);
    return *this;
}

TailFunction& TailFunction::with_inverse(Fn inverse) {
    inverse_ = std::move(inverse);
    return *this;
}

TailFunction& TailFunction::with_left_limit(Fn left_limit) {
    left_limit_ = std::move(left_limit);
    return *this;
}

TailFunction& TailFunction::with_breakpoints(std::vector<double> points) {
    breakpoints_ = std::move(points);
    return *this;
}

double TailFunction::operator()(double x) const {
    if (!value_) {
        return 0.0;
    }
    return value_(x);
}

double TailFunction::left_limit(double x) const {
    if (!value_) {
        return 0.0;
    }
    if (left_limit_) {
        return left_limit_(x);
    }
    return value_(x * (1.0 - 1e-12));
}

double TailFunction::density(double x) const {
    if (!value_) {
        return 0.0;
    }
    if (!density_) {
        throw PreconditionError("tail has no density");
    }
    return density_(x);
}

double TailFunction::inverse(double y) const {
    if (!value_) {
        return 0.0;
    }
    if (!inverse_) {
        throw PreconditionError("tail has no closed-form inverse");
    }
    return inverse_(y);
}

TailFunction power_tail(double alpha, double c) {
    if (c == 0.0) {
        return TailFunction::zero();
    }
    TailFunction t([alpha, c](double x) {
        if (!(x > 0.0)) {
            return kInf;
        }
        return x <= 1.0 ? c * std::pow(x, -alpha) : c * std::exp(-alpha * (x - 1.0));
    });
    t.with_density([alpha, c](double x) {
         if (!(x > 0.0)) {
             return kInf;
         }
         return x <= 1.0 ? c * alpha * std::pow(x, -alpha - 1.0)
                         : c * alpha * std::exp(-alpha * (x - 1.0));
     })
        .with_inverse([alpha, c](double y) {
            if (!(y > 0.0)) {
                return kInf;
            }
            if (y >= c) {
                return std::pow(c / y, 1.0 / alpha);
            }
            return 1.0 + std::log(c / y) / alpha;
        })
        .with_left_limit([alpha, c](double x) {
            if (!(x > 0.0)) {
                return kInf;
            }
            return x <= 1.0 ? c * std::pow(x, -alpha) : c * std::exp(-alpha * (x - 1.0));
        })
        .with_breakpoints({1.0});
    return t;
}

TailFunction table_tail(std::vector<double> x, std::vector<double> values) {
    if (x.size() != values.size() || x.size() < 2) {
        throw DomainError("table tail needs matching x and value arrays with at least 2 nodes");
    }
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> xs(x.size());
    std::vector<double> vs(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        xs[i] = x[order[i]];
        vs[i] = values[order[i]];
        if (!(xs[i] > 0.0) || !std::isfinite(xs[i])) {
            throw DomainError("table tail abscissae must be positive and finite");
        }
        if (!(vs[i] >= 0.0) || !std::isfinite(vs[i])) {
            throw DomainError("table tail values must be non-negative and finite");
        }
        if (i > 0 && xs[i] == xs[i - 1]) {
            throw DomainError("table tail abscissae must be distinct");
        }
    }

    auto slope = [&](std::size_t i) {
        // Log-log slope of segment [i, i+1]; NaN when a value vanishes.
        if (vs[i] <= 0.0 || vs[i + 1] <= 0.0) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return std::log(vs[i + 1] / vs[i]) / std::log(xs[i + 1] / xs[i]);
    };
    const double low_slope = slope(0);
    const double high_slope = slope(xs.size() - 2);

    auto value = [xs, vs, low_slope, high_slope](double q) {
        if (!(q > 0.0)) {
            return kInf;
        }
        const std::size_t n = xs.size();
        if (q < xs.front()) {
            if (std::isnan(low_slope) || low_slope >= 0.0) {
                return vs.front();
            }
            return vs.front() * std::pow(q / xs.front(), low_slope);
        }
        if (q > xs.back()) {
            if (std::isnan(high_slope) || high_slope >= 0.0) {
                return 0.0;
            }
            return vs.back() * std::pow(q / xs.back(), high_slope);
        }
        const auto it = std::upper_bound(xs.begin(), xs.end(), q);
        std::size_t i = static_cast<std::size_t>(it - xs.begin());
        if (i >= n) {
            return vs.back();
        }
        i -= 1;
        const double a = vs[i];
        const double b = vs[i + 1];
        if (a > 0.0 && b > 0.0) {
            const double w = std::log(q / xs[i]) / std::log(xs[i + 1] / xs[i]);
            return a * std::pow(b / a, w);
        }
        const double w = (q - xs[i]) / (xs[i + 1] - xs[i]);
        return a + (b - a) * w;
    };
    TailFunction t(value);
    t.with_left_limit(value).with_breakpoints(xs);
    return t;
}

}  // namespace levypos
