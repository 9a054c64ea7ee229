#include <random>

#include "doctest.h"
#include "iscat/hopf.hpp"

using namespace iscat::hopf;

namespace {

// -ln T by the truncated power series sum (-1)^{k+1}/k (T-1)^k, independent of
// the derivation recursion used in the library.
WordSeries log_by_power_series(const WordSeries& t) {
  const int m = t.max_degree;
  WordSeries x = t - WordSeries::unit(m);
  WordSeries power = x, out(m);
  for (int k = 1; k <= m; ++k) {
    out += Rational(k % 2 ? 1 : -1, k) * power;
    power = shuffle(power, x);
  }
  return out;
}

Word random_admissible(std::mt19937& rng, int deg) {
  // rejection sampling of Dyck-type words
  std::uniform_int_distribution<int> coin(0, 1);
  while (true) {
    Word w;
    int bal = 0, xs = 0;
    bool ok = true;
    for (int i = 0; i < 2 * deg; ++i) {
      bool x = coin(rng) && xs < deg;
      if (!x && bal == 0) x = true;
      if (x && xs == deg) {
        ok = false;
        break;
      }
      w += x ? 'X' : 'Y';
      bal += x ? 1 : -1;
      xs += x;
    }
    if (ok && bal == 0) return w;
  }
}

}  // namespace

TEST_CASE("word classification") {
  CHECK(classify_word("XY") == WordClass::AdmissibleConnected);
  CHECK(classify_word("XYXY") == WordClass::AdmissibleDisconnected);
  CHECK(classify_word("XXY") == WordClass::Inadmissible);
  CHECK(classify_word("YX") == WordClass::Inadmissible);
  CHECK(classify_word("XXYXYY") == WordClass::AdmissibleConnected);
}

TEST_CASE("shuffle examples") {
  auto s = shuffle("XY", "XY");
  CHECK(s.terms.size() == 2);
  CHECK(s.coeff("XYXY") == 2);
  CHECK(s.coeff("XXYY") == 4);
  auto raw = raw_shuffle("X", "XY");
  CHECK(raw.size() == 2);
  CHECK(raw["XXY"] == 2);
  CHECK(raw["XYX"] == 1);
  auto e = shuffle("", "XXYY");
  CHECK(e.terms.size() == 1);
  CHECK(e.coeff("XXYY") == 1);
}

TEST_CASE("shuffle is commutative and associative") {
  std::mt19937 rng(3);
  for (int t = 0; t < 20; ++t) {
    std::uniform_int_distribution<int> d(1, 2);
    Word a = random_admissible(rng, d(rng)), b = random_admissible(rng, d(rng)),
         c = random_admissible(rng, 1);
    CHECK(shuffle(a, b) == shuffle(b, a));
    auto left = shuffle(shuffle(a, b), WordSeries::word(c));
    auto right = shuffle(WordSeries::word(a), shuffle(b, c));
    CHECK(left == right);
    for (const auto& [w, q] : left.terms) CHECK(is_admissible(w));
  }
}

TEST_CASE("coproduct examples") {
  auto c = coproduct("XY");
  CHECK(c.terms.size() == 2);
  c = coproduct("XYXY");
  CHECK(c.terms.size() == 3);
  CHECK(c.terms.count({"XY", "XY"}) == 1);
  c = coproduct("XXYY");
  CHECK(c.terms.size() == 2);
  CHECK(c.terms.count({"", "XXYY"}) == 1);
  CHECK(c.terms.count({"XXYY", ""}) == 1);
}

TEST_CASE("coproduct is a shuffle morphism") {
  std::mt19937 rng(11);
  for (int t = 0; t < 25; ++t) {
    std::uniform_int_distribution<int> d(1, 3);
    const int da = d(rng);
    std::uniform_int_distribution<int> d2(1, std::max(1, 5 - da));
    Word a = random_admissible(rng, da), b = random_admissible(rng, std::min(d2(rng), 5 - da));
    auto lhs = coproduct(shuffle(a, b));
    auto rhs = tensor_shuffle(coproduct(a), coproduct(b));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("transmission series is group-like") {
  for (int m : {3, 6}) {
    auto t = transmission_series(m);
    auto lhs = coproduct(t);
    auto rhs = tensor_product(t, t);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("log and exp") {
  auto t = WordSeries::unit(2) + WordSeries::word("XY", 2);
  auto l = series_log(t);
  CHECK(l.terms.size() == 3);
  CHECK(l.coeff("XY") == 1);
  CHECK(l.coeff("XYXY") == -1);
  CHECK(l.coeff("XXYY") == -2);

  auto one = series_exp(WordSeries(4));
  CHECK(one.terms.size() == 1);
  CHECK(one.coeff("") == 1);

  auto e = series_exp(WordSeries::word("XY", 2));
  CHECK(e.coeff("XYXY") == 1);
  CHECK(e.coeff("XXYY") == 2);

  CHECK_THROWS(series_log(WordSeries::word("XY", 2)));
  CHECK_THROWS(series_exp(WordSeries::unit(2)));

  auto t5 = transmission_series(5);
  CHECK(series_exp(series_log(t5)) == t5);
}

TEST_CASE("expansion of -ln T") {
  auto l = logT_expansion(5);
  CHECK(l.coeff("XY") == 1);
  CHECK(l.coeff("XXYY") == -2);
  CHECK(l.coeff("XXXYYY") == 12);
  CHECK(l.coeff("XXYXYY") == 4);
  CHECK(l.homogeneous(3).terms.size() == 2);
  CHECK(l.coeff("XXXXXYYYYY") == 2880);
  CHECK(l.coeff("XXYXYXYXYY") == 16);
  CHECK(l.coeff("XXYXXYYXYY") == 48);

  for (int m = 1; m <= 6; ++m) CHECK(logT_expansion(m) == log_by_power_series(transmission_series(m)));

  CHECK_THROWS(logT_expansion(0));
  CHECK_THROWS(logT_expansion(9));
  CHECK_NOTHROW(logT_expansion(9, 10));
}

TEST_CASE("primitivity") {
  CHECK(check_primitive(WordSeries::word("XY"), 1));
  CHECK_FALSE(check_primitive(WordSeries::word("XYXY"), 2));
  auto l = logT_expansion(6);
  for (int k = 1; k <= 6; ++k) {
    auto part = l.homogeneous(k);
    CHECK(check_primitive(part, k));
    for (const auto& [w, q] : part.terms) CHECK(classify_word(w) == WordClass::AdmissibleConnected);
  }
  // exp/log round trip from the primitive side
  CHECK(series_exp(l) == transmission_series(6));
}

TEST_CASE("rational formatting") {
  CHECK(to_string(Rational(-3, 6)) == "-1/2");
  CHECK(to_string(Rational(12)) == "12/1");
}
