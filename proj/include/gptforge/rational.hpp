#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>

#include <initializer_list>
#include <string>
#include <vector>

namespace gptforge {

using Rat = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

using RatVec = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using RatMat = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

/// Parses "p" or "p/q" (q > 0) into a canonical rational. Throws
/// std::invalid_argument on malformed input or a zero denominator.
Rat parse_rational(const std::string& text);

/// Lowest-terms text form: "p/q", or "p" when the denominator is 1.
std::string rat_to_string(const Rat& q);

RatVec vec_from_strings(const std::vector<std::string>& coords);
std::vector<std::string> strings_from_vec(const RatVec& v);

RatVec make_vec(std::initializer_list<Rat> coords);

inline Rat dot(const RatVec& a, const RatVec& b) { return a.dot(b); }

bool vec_eq(const RatVec& a, const RatVec& b);
bool mat_eq(const RatMat& a, const RatMat& b);
bool is_zero_vec(const RatVec& v);

/// Kronecker product, row-major in the first factor: (a ⊗ b)[i*nb + j] = a[i] b[j].
RatVec kron(const RatVec& a, const RatVec& b);
RatMat kron(const RatMat& a, const RatMat& b);

/// Column-times-row outer product (|v)(w| as a matrix).
RatMat outer(const RatVec& v, const RatVec& w);

}  // namespace gptforge
