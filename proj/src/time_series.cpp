#include "fracsource/time_series.hpp"

#include "fracsource/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracsource {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("fractional order must lie in (0, 1), got " + std::to_string(alpha));
    }
}

TimeGrid::TimeGrid(double final_time, std::size_t n_steps)
    : final_time_(final_time), n_steps_(n_steps) {
    if (!(final_time > 0.0) || !std::isfinite(final_time)) {
        throw InvalidArgument("final time must be positive, got " + std::to_string(final_time));
    }
    if (n_steps < 2) throw InvalidArgument("time grid needs n_steps >= 2");
}

double TimeGrid::node(std::size_t k) const {
    if (k > n_steps_) throw InvalidArgument("time node index out of range");
    if (k == n_steps_) return final_time_;
    return final_time_ * static_cast<double>(k) / static_cast<double>(n_steps_);
}

std::vector<double> TimeGrid::nodes() const {
    std::vector<double> t(size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = node(k);
    return t;
}

TimeSeries::TimeSeries(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InvalidArgument("time series has " + std::to_string(values_.size()) +
                              " values for a grid of " + std::to_string(grid_.size()) + " nodes");
    }
}

TimeSeries TimeSeries::zeros(const TimeGrid& grid) { return constant(grid, 0.0); }

TimeSeries TimeSeries::constant(const TimeGrid& grid, double value) {
    return TimeSeries(grid, std::vector<double>(grid.size(), value));
}

TimeSeries TimeSeries::sample(const TimeGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.node(k));
    return TimeSeries(grid, std::move(v));
}

TimeSeries TimeSeries::reversed() const {
    std::vector<double> v(values_.rbegin(), values_.rend());
    return TimeSeries(grid_, std::move(v));
}

double TimeSeries::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double TimeSeries::l2_norm() const {
    const double tau = grid_.step();
    double acc = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        const double w = (k == 0 || k + 1 == values_.size()) ? 0.5 : 1.0;
        acc += w * values_[k] * values_[k];
    }
    return std::sqrt(acc * tau);
}

double TimeSeries::l1_norm() const {
    const double tau = grid_.step();
    double acc = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        const double w = (k == 0 || k + 1 == values_.size()) ? 0.5 : 1.0;
        acc += w * std::abs(values_[k]);
    }
    return acc * tau;
}

TimeSeries& TimeSeries::operator+=(const TimeSeries& other) {
    if (!(grid_ == other.grid_)) throw InvalidArgument("time series on different grids");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

TimeSeries& TimeSeries::operator-=(const TimeSeries& other) {
    if (!(grid_ == other.grid_)) throw InvalidArgument("time series on different grids");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

TimeSeries& TimeSeries::operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
}

TimeSeries operator+(TimeSeries a, const TimeSeries& b) { return a += b; }
TimeSeries operator-(TimeSeries a, const TimeSeries& b) { return a -= b; }
TimeSeries operator*(double s, TimeSeries f) { return f *= s; }

double relative_l2_error(const TimeSeries& approx, const TimeSeries& exact) {
    const double denom = exact.l2_norm();
    const double num = (approx - exact).l2_norm();
    if (denom == 0.0) return num;
    return num / denom;
}

}  // namespace fracsource
