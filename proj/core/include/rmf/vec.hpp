#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "rmf/errors.hpp"

namespace rmf {

// Points and directions in R^n with the dimension carried at runtime.
using Vec = Eigen::VectorXd;

inline void check_finite(const Vec& u, const char* what) {
    if (!u.allFinite()) throw NumericalError(std::string(what) + ": non-finite component");
}

/// Standard inner product <u,v> = sum u_i v_i.
inline double inner(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw DimensionError(static_cast<int>(u.size()), static_cast<int>(v.size()));
    return u.dot(v);
}

/// Euclidean norm, sqrt(<u,u>).
inline double norm(const Vec& u) {
    return std::sqrt(u.dot(u));
}

inline Vec make_vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

}  // namespace rmf
