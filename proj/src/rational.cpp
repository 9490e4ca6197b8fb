#include "gptforge/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace gptforge {

Rat parse_rational(const std::string& text) {
  const auto bad = [&] {
    return std::invalid_argument("malformed rational: \"" + text + "\"");
  };
  std::size_t pos = 0;
  if (pos < text.size() && text[pos] == '-') ++pos;
  std::size_t digits = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    ++pos;
    ++digits;
  }
  if (digits == 0) throw bad();
  std::string num = text.substr(0, pos);
  std::string den = "1";
  if (pos < text.size()) {
    if (text[pos] != '/') throw bad();
    den = text.substr(pos + 1);
    if (den.empty()) throw bad();
    for (char c : den) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    }
  }
  BigInt d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: \"" + text + "\"");
  return Rat(BigInt(num), d);  // the two-integer constructor canonicalizes
}

std::string rat_to_string(const Rat& q) { return q.str(); }

RatVec vec_from_strings(const std::vector<std::string>& coords) {
  RatVec v(static_cast<Index>(coords.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = parse_rational(coords[static_cast<std::size_t>(i)]);
  return v;
}

std::vector<std::string> strings_from_vec(const RatVec& v) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) out.push_back(rat_to_string(v(i)));
  return out;
}

RatVec make_vec(std::initializer_list<Rat> coords) {
  RatVec v(static_cast<Index>(coords.size()));
  Index i = 0;
  for (const Rat& q : coords) v(i++) = q;
  return v;
}

bool vec_eq(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return false;
  }
  return true;
}

bool mat_eq(const RatMat& a, const RatMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return false;
    }
  }
  return true;
}

bool is_zero_vec(const RatVec& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0) return false;
  }
  return true;
}

RatVec kron(const RatVec& a, const RatVec& b) {
  RatVec out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  }
  return out;
}

RatMat kron(const RatMat& a, const RatMat& b) {
  RatMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      for (Index k = 0; k < b.rows(); ++k) {
        for (Index l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
      }
    }
  }
  return out;
}

RatMat outer(const RatVec& v, const RatVec& w) {
  RatMat out(v.size(), w.size());
  for (Index i = 0; i < v.size(); ++i) {
    for (Index j = 0; j < w.size(); ++j) out(i, j) = v(i) * w(j);
  }
  return out;
}

}  // namespace gptforge
