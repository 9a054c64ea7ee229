#include "iscat/hopf.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "iscat/errors.hpp"

namespace iscat::hopf {

WordClass classify_word(const Word& w) {
  int bal = 0;
  bool connected = true;
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 'X') ++bal;
    else if (w[i] == 'Y') --bal;
    else return WordClass::Inadmissible;
    if (bal < 0) return WordClass::Inadmissible;
    if (bal == 0 && i + 1 < w.size()) connected = false;
  }
  if (bal != 0) return WordClass::Inadmissible;
  if (w.empty()) return WordClass::AdmissibleDisconnected;
  return connected ? WordClass::AdmissibleConnected : WordClass::AdmissibleDisconnected;
}

bool is_admissible(const Word& w) { return classify_word(w) != WordClass::Inadmissible; }

int degree(const Word& w) { return static_cast<int>(w.size() / 2); }

WordSeries WordSeries::unit(int m) {
  WordSeries s(m);
  s.terms[""] = 1;
  return s;
}

WordSeries WordSeries::word(const Word& w, int m) {
  WordSeries s(m);
  s.add(w, 1);
  return s;
}

Rational WordSeries::coeff(const Word& w) const {
  auto it = terms.find(w);
  return it == terms.end() ? Rational(0) : it->second;
}

void WordSeries::add(const Word& w, const Rational& c) {
  if (degree(w) > max_degree || c == 0) return;
  auto [it, inserted] = terms.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

WordSeries& WordSeries::operator+=(const WordSeries& o) {
  max_degree = std::min(max_degree, o.max_degree);
  for (const auto& [w, c] : o.terms) add(w, c);
  return *this;
}

WordSeries& WordSeries::operator-=(const WordSeries& o) {
  max_degree = std::min(max_degree, o.max_degree);
  for (const auto& [w, c] : o.terms) add(w, -c);
  return *this;
}

WordSeries& WordSeries::operator*=(const Rational& c) {
  if (c == 0) {
    terms.clear();
    return *this;
  }
  for (auto& [w, v] : terms) v *= c;
  return *this;
}

WordSeries WordSeries::homogeneous(int k) const {
  WordSeries s(max_degree);
  for (const auto& [w, c] : terms)
    if (degree(w) == k) s.terms.emplace(w, c);
  return s;
}

WordSeries WordSeries::truncated(int m) const {
  WordSeries s(std::min(m, max_degree));
  for (const auto& [w, c] : terms)
    if (degree(w) <= s.max_degree) s.terms.emplace(w, c);
  return s;
}

void WordSeries::prune() {
  for (auto it = terms.begin(); it != terms.end();)
    it = (it->second == 0 || degree(it->first) > max_degree) ? terms.erase(it) : std::next(it);
}

bool WordSeries::operator==(const WordSeries& o) const {
  const int m = std::min(max_degree, o.max_degree);
  return truncated(m).terms == o.truncated(m).terms;
}

std::vector<std::pair<Word, Rational>> WordSeries::sorted() const {
  std::vector<std::pair<Word, Rational>> out(terms.begin(), terms.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  return out;
}

WordSeries operator+(WordSeries a, const WordSeries& b) { return a += b; }
WordSeries operator-(WordSeries a, const WordSeries& b) { return a -= b; }
WordSeries operator*(const Rational& c, WordSeries a) { return a *= c; }

void TensorSeries::add(const Word& a, const Word& b, const Rational& c) {
  if (degree(a) + degree(b) > max_degree || c == 0) return;
  auto [it, inserted] = terms.emplace(std::make_pair(a, b), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

TensorSeries& TensorSeries::operator+=(const TensorSeries& o) {
  max_degree = std::min(max_degree, o.max_degree);
  for (const auto& [k, c] : o.terms) add(k.first, k.second, c);
  return *this;
}

void TensorSeries::prune() {
  for (auto it = terms.begin(); it != terms.end();)
    it = it->second == 0 ? terms.erase(it) : std::next(it);
}

bool TensorSeries::operator==(const TensorSeries& o) const { return terms == o.terms; }

namespace {

// Interleavings counted by integers; converted to rationals once.
std::unordered_map<Word, long long> shuffle_counts(const Word& a, const Word& b) {
  std::unordered_map<Word, long long> out;
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  const int len = m + n;
  if (m == 0 || n == 0) {
    out[m == 0 ? b : a] = 1;
    return out;
  }
  Word buf(len, ' ');
  // positions of a's letters: all m-subsets of [0, len), Gosper's hack
  std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  const std::uint64_t limit = std::uint64_t{1} << len;
  while (mask < limit) {
    int ia = 0, ib = 0;
    for (int p = 0; p < len; ++p) buf[p] = (mask >> p & 1) ? a[ia++] : b[ib++];
    ++out[buf];
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return out;
}

}  // namespace

std::map<Word, Rational> raw_shuffle(const Word& a, const Word& b) {
  std::map<Word, Rational> out;
  for (const auto& [w, n] : shuffle_counts(a, b)) out[w] = n;
  return out;
}

WordSeries shuffle(const Word& a, const Word& b, int max_degree) {
  WordSeries s(max_degree);
  if (degree(a) + degree(b) > max_degree) return s;
  for (const auto& [w, n] : shuffle_counts(a, b)) s.add(w, n);
  return s;
}

WordSeries shuffle(const WordSeries& a, const WordSeries& b) {
  const int m = std::min(a.max_degree, b.max_degree);
  std::map<Word, Rational> acc;
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms) {
      if (degree(wa) + degree(wb) > m) continue;
      const Rational c = ca * cb;
      for (const auto& [w, n] : shuffle_counts(wa, wb)) acc[w] += c * n;
    }
  WordSeries s(m);
  for (auto& [w, c] : acc)
    if (c != 0) s.terms.emplace(w, std::move(c));
  return s;
}

TensorSeries coproduct(const Word& w) {
  TensorSeries t;
  for (size_t cut = 0; cut <= w.size(); ++cut) {
    Word a = w.substr(0, cut), b = w.substr(cut);
    if (is_admissible(a) && is_admissible(b)) t.add(a, b, 1);
  }
  return t;
}

TensorSeries coproduct(const WordSeries& s) {
  TensorSeries t;
  t.max_degree = s.max_degree;
  for (const auto& [w, c] : s.terms)
    for (const auto& [k, v] : coproduct(w).terms) t.add(k.first, k.second, c * v);
  return t;
}

TensorSeries tensor_shuffle(const TensorSeries& a, const TensorSeries& b) {
  TensorSeries t;
  t.max_degree = std::min(a.max_degree, b.max_degree);
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      if (degree(ka.first) + degree(ka.second) + degree(kb.first) + degree(kb.second) > t.max_degree)
        continue;
      auto left = shuffle_counts(ka.first, kb.first);
      auto right = shuffle_counts(ka.second, kb.second);
      const Rational c = ca * cb;
      for (const auto& [l, nl] : left)
        for (const auto& [r, nr] : right) t.add(l, r, c * (nl * nr));
    }
  return t;
}

TensorSeries tensor_product(const WordSeries& a, const WordSeries& b) {
  TensorSeries t;
  t.max_degree = std::min(a.max_degree, b.max_degree);
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms) t.add(wa, wb, ca * cb);
  return t;
}

WordSeries series_log(const WordSeries& t) {
  if (t.coeff("") != 1)
    throw Error(ErrorCode::Domain, "series_log needs constant term 1");
  const int m = t.max_degree;
  if (m >= kUnbounded) throw Error(ErrorCode::Domain, "series_log needs a finite degree cutoff");
  std::vector<WordSeries> tk(m + 1), lk(m + 1);
  for (int k = 0; k <= m; ++k) tk[k] = t.homogeneous(k);
  WordSeries out(m);
  // n L_n = n t_n - sum_{k<n} k L_k sh t_{n-k}
  for (int n = 1; n <= m; ++n) {
    WordSeries acc = Rational(n) * tk[n];
    for (int k = 1; k < n; ++k) acc -= Rational(k) * shuffle(lk[k], tk[n - k]);
    acc *= Rational(1, n);
    lk[n] = acc;
    out += acc;
  }
  return out;
}

WordSeries series_exp(const WordSeries& p) {
  if (p.coeff("") != 0)
    throw Error(ErrorCode::Domain, "series_exp needs zero constant term");
  const int m = p.max_degree;
  if (m >= kUnbounded) throw Error(ErrorCode::Domain, "series_exp needs a finite degree cutoff");
  std::vector<WordSeries> pk(m + 1), gk(m + 1);
  for (int k = 0; k <= m; ++k) pk[k] = p.homogeneous(k);
  gk[0] = WordSeries::unit(m);
  WordSeries out = gk[0];
  // n G_n = sum_{k=1}^n k P_k sh G_{n-k}
  for (int n = 1; n <= m; ++n) {
    WordSeries acc(m);
    for (int k = 1; k <= n; ++k) acc += Rational(k) * shuffle(pk[k], gk[n - k]);
    acc *= Rational(1, n);
    gk[n] = acc;
    out += acc;
  }
  return out;
}

WordSeries transmission_series(int max_degree) {
  WordSeries t = WordSeries::unit(max_degree);
  Word w;
  for (int k = 1; k <= max_degree; ++k) {
    w += "XY";
    t.add(w, 1);
  }
  return t;
}

WordSeries logT_expansion(int max_degree, int cap) {
  if (max_degree < 1 || max_degree > cap)
    throw Error(ErrorCode::Domain, "max_degree out of range [1, " + std::to_string(cap) + "]");
  return series_log(transmission_series(max_degree));
}

bool check_primitive(const WordSeries& p, int deg) {
  for (const auto& [w, c] : p.terms)
    if (degree(w) != deg) return false;
  TensorSeries lhs = coproduct(p);
  TensorSeries rhs;
  for (const auto& [w, c] : p.terms) {
    rhs.add("", w, c);
    rhs.add(w, "", c);
  }
  return lhs == rhs;
}

std::string to_string(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace iscat::hopf
