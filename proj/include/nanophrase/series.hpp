#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nanophrase/signed_word.hpp"

namespace nanophrase {

// Monomial in the non-commuting variables kappa_1..kappa_n: the ordered list
// of component indices. The empty monomial is the constant term.
using Monomial = std::vector<int>;

// Integer-coefficient non-commutative power series truncated at a degree
// bound. Zero coefficients are never stored.
class MagnusSeries {
public:
  explicit MagnusSeries(int bound) : bound_(bound) {
    if (bound < 0)
      throw Error("series bound must be >= 0");
  }

  static MagnusSeries one(int bound) {
    MagnusSeries s(bound);
    s.terms_[{}] = 1;
    return s;
  }

  // phi(a_k) = 1 + kappa_k; phi(a_k^-1) = 1 - kappa_k + kappa_k^2 - ...
  static MagnusSeries unit_factor(int k, int exp, int bound) {
    MagnusSeries s = one(bound);
    if (exp == 1) {
      if (bound >= 1)
        s.terms_[{k}] = 1;
    } else if (exp == -1) {
      Monomial m;
      long long c = 1;
      for (int d = 1; d <= bound; ++d) {
        m.push_back(k);
        c = -c;
        s.terms_[m] = c;
      }
    } else {
      throw Error("unit factor exponent must be +1 or -1");
    }
    return s;
  }

  int bound() const { return bound_; }
  const std::map<Monomial, long long>& terms() const { return terms_; }

  long long coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }

  void set_coefficient(const Monomial& m, long long c) {
    if (static_cast<int>(m.size()) > bound_)
      throw Error("monomial degree exceeds the series bound");
    if (c == 0)
      terms_.erase(m);
    else
      terms_[m] = c;
  }

  MagnusSeries truncated(int new_bound) const {
    MagnusSeries out(new_bound);
    for (const auto& [m, c] : terms_)
      if (static_cast<int>(m.size()) <= new_bound)
        out.terms_[m] = c;
    return out;
  }

  friend MagnusSeries operator*(const MagnusSeries& a, const MagnusSeries& b) {
    int bound = std::min(a.bound_, b.bound_);
    MagnusSeries out(bound);
    for (const auto& [ma, ca] : a.terms_) {
      if (static_cast<int>(ma.size()) > bound)
        continue;
      for (const auto& [mb, cb] : b.terms_) {
        if (static_cast<int>(ma.size() + mb.size()) > bound)
          continue;
        Monomial m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        auto& slot = out.terms_[m];
        slot += ca * cb;
        if (slot == 0)
          out.terms_.erase(m);
      }
    }
    return out;
  }

  friend MagnusSeries operator+(const MagnusSeries& a, const MagnusSeries& b) {
    MagnusSeries out(std::min(a.bound_, b.bound_));
    out.terms_ = a.terms_;
    for (const auto& [m, c] : b.terms_) {
      if (static_cast<int>(m.size()) > out.bound_)
        continue;
      auto& slot = out.terms_[m];
      slot += c;
      if (slot == 0)
        out.terms_.erase(m);
    }
    for (auto it = out.terms_.begin(); it != out.terms_.end();) {
      if (static_cast<int>(it->first.size()) > out.bound_)
        it = out.terms_.erase(it);
      else
        ++it;
    }
    return out;
  }

  friend MagnusSeries operator-(const MagnusSeries& a, const MagnusSeries& b) {
    MagnusSeries neg = b;
    for (auto& [m, c] : neg.terms_)
      c = -c;
    return a + neg;
  }

  bool operator==(const MagnusSeries& other) const {
    return bound_ == other.bound_ && terms_ == other.terms_;
  }

private:
  int bound_;
  std::map<Monomial, long long> terms_;
};

// Multiplicative extension of phi over an eta-image word; the empty word
// maps to 1.
inline MagnusSeries phi_series(const EtaWord& w, int bound) {
  MagnusSeries out = MagnusSeries::one(bound);
  for (const ComponentSym& s : w)
    out = out * MagnusSeries::unit_factor(s.index, s.exp, bound);
  return out;
}

// Inverse of a series with constant term 1: 1 - N + N^2 - ... where N is
// the augmentation part (exact under truncation).
inline MagnusSeries series_inverse(const MagnusSeries& s) {
  if (s.coefficient({}) != 1)
    throw Error("series inverse needs constant term 1");
  int bound = s.bound();
  MagnusSeries n = s - MagnusSeries::one(bound);
  MagnusSeries out = MagnusSeries::one(bound);
  MagnusSeries power = MagnusSeries::one(bound);
  for (int d = 1; d <= bound; ++d) {
    power = power * n;
    if (power.terms().empty())
      break;
    if (d % 2 == 1)
      out = out - power;
    else
      out = out + power;
  }
  return out;
}

namespace detail {

// Memoized evaluation of phi.eta(rho^q(occurrence)) without materializing
// the expanding word. The key identity: phi.eta(rho^q(x^-1)) equals the
// series inverse of phi.eta(rho^q(x)), so one series per (occurrence, q)
// suffices.
class SeriesMemo {
public:
  SeriesMemo(const MagnusContext& ctx, int bound) : ctx_(ctx), bound_(bound) {}

  // phi.eta(rho^q(occ^{+1}))
  const MagnusSeries& positive(int id, int q) {
    auto key = std::make_pair(id, q);
    auto it = memo_.find(key);
    if (it != memo_.end())
      return it->second;
    MagnusSeries result = MagnusSeries::one(bound_);
    MagnusSeries head = MagnusSeries::unit_factor(ctx_.occs[id].eta, 1, bound_);
    if (q == 2) {
      result = head;
    } else {
      MagnusSeries prefix = MagnusSeries::one(bound_);
      for (const auto& [pid, psign] : ctx_.occs[id].prefix) {
        const MagnusSeries& ps = positive(pid, q - 1);
        prefix = prefix * (psign == 1 ? ps : series_inverse(ps));
      }
      result = series_inverse(prefix) * head * prefix;
    }
    return memo_.emplace(key, std::move(result)).first->second;
  }

  MagnusSeries with_sign(int id, int sign, int q) {
    const MagnusSeries& s = positive(id, q);
    return sign == 1 ? s : series_inverse(s);
  }

private:
  const MagnusContext& ctx_;
  int bound_;
  std::map<std::pair<int, int>, MagnusSeries> memo_;
};

}  // namespace detail

// phi.eta(rho^q(w_i^eps)) computed through the memoized recursion. Agrees
// exactly with phi_series(eta_word(p, rho_expand(p, i, q)), bound).
inline MagnusSeries component_series(const Nanophrase& p, int i, int q, int bound) {
  if (q < 2)
    throw Error("component series needs q >= 2");
  if (i < 1 || i > p.component_count())
    throw Error("component index " + std::to_string(i) + " out of range");
  detail::MagnusContext ctx(p);
  detail::SeriesMemo memo(ctx, bound);
  MagnusSeries out = MagnusSeries::one(bound);
  for (int id : ctx.component_words[i - 1])
    out = out * memo.with_sign(id, ctx.occs[id].sign, q);
  return out;
}

// Sorted "monomial: coefficient" lines; constant term rendered as "1".
inline std::string render_series(const MagnusSeries& s) {
  std::vector<std::pair<Monomial, long long>> items(s.terms().begin(), s.terms().end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size())
      return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::ostringstream out;
  for (const auto& [m, c] : items) {
    if (m.empty()) {
      out << "1: " << c << '\n';
      continue;
    }
    for (std::size_t i = 0; i < m.size(); ++i)
      out << (i ? " " : "") << "k_" << m[i];
    out << ": " << c << '\n';
  }
  return out.str();
}

}  // namespace nanophrase
