#include "qosc/pathcoeff.hpp"

#include <cmath>
#include <stdexcept>

namespace qosc::shiftops {

PathCoefficient PathCoefficient::one() {
    PathCoefficient c;
    c.rho_ = 1;
    return c;
}

void PathCoefficient::mul_rational(const Rational& r) {
    rho_ *= r;
    if (rho_ == 0) {
        open_.clear();
    }
}

void PathCoefficient::mul_weight(int index, const Rational& squared_weight) {
    if (rho_ == 0) {
        return;
    }
    if (squared_weight == 0) {
        rho_ = 0;
        open_.clear();
        return;
    }
    auto it = open_.find(index);
    if (it != open_.end()) {
        rho_ *= it->second;
        open_.erase(it);
    } else {
        open_.emplace(index, squared_weight);
    }
}

void PathCoefficient::add(const PathCoefficient& other) {
    if (other.rho_ == 0) {
        return;
    }
    if (rho_ == 0) {
        *this = other;
        return;
    }
    if (open_ != other.open_) {
        throw std::logic_error("PathCoefficient::add: mismatched radical parts");
    }
    rho_ += other.rho_;
    if (rho_ == 0) {
        open_.clear();
    }
}

void PathCoefficient::sub(const PathCoefficient& other) {
    PathCoefficient neg = other;
    neg.mul_rational(Rational(-1));
    add(neg);
}

double PathCoefficient::abs() const {
    double v = std::abs(to_double(rho_));
    for (const auto& [idx, w] : open_) {
        (void)idx;
        v *= std::sqrt(to_double(w));
    }
    return v;
}

Rational PathCoefficient::abs_squared() const {
    Rational v = rho_ * rho_;
    for (const auto& [idx, w] : open_) {
        (void)idx;
        v *= w;
    }
    return v;
}

} // namespace qosc::shiftops
