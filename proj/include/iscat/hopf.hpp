#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace iscat::hopf {

using Rational = boost::multiprecision::mpq_rational;
using Word = std::string;  // letters 'X', 'Y'; empty word is the unit

enum class WordClass { Inadmissible, AdmissibleDisconnected, AdmissibleConnected };

WordClass classify_word(const Word& w);
bool is_admissible(const Word& w);
int degree(const Word& w);

constexpr int kUnbounded = 1 << 20;

struct WordSeries {
  std::map<Word, Rational> terms;
  int max_degree = kUnbounded;

  WordSeries() = default;
  explicit WordSeries(int m) : max_degree(m) {}
  static WordSeries unit(int m = kUnbounded);
  static WordSeries word(const Word& w, int m = kUnbounded);

  Rational coeff(const Word& w) const;
  void add(const Word& w, const Rational& c);
  WordSeries& operator+=(const WordSeries& o);
  WordSeries& operator-=(const WordSeries& o);
  WordSeries& operator*=(const Rational& c);
  WordSeries homogeneous(int k) const;
  WordSeries truncated(int m) const;
  void prune();
  bool operator==(const WordSeries& o) const;
  // entries sorted by degree, then lexicographically
  std::vector<std::pair<Word, Rational>> sorted() const;
};

WordSeries operator+(WordSeries a, const WordSeries& b);
WordSeries operator-(WordSeries a, const WordSeries& b);
WordSeries operator*(const Rational& c, WordSeries a);

struct TensorSeries {
  std::map<std::pair<Word, Word>, Rational> terms;
  int max_degree = kUnbounded;

  void add(const Word& a, const Word& b, const Rational& c);
  TensorSeries& operator+=(const TensorSeries& o);
  void prune();
  bool operator==(const TensorSeries& o) const;
};

// Shuffle on unrestricted words: every interleaving counted.
std::map<Word, Rational> raw_shuffle(const Word& a, const Word& b);

WordSeries shuffle(const Word& a, const Word& b, int max_degree = kUnbounded);
WordSeries shuffle(const WordSeries& a, const WordSeries& b);

TensorSeries coproduct(const Word& w);
TensorSeries coproduct(const WordSeries& s);
TensorSeries tensor_shuffle(const TensorSeries& a, const TensorSeries& b);
TensorSeries tensor_product(const WordSeries& a, const WordSeries& b);

WordSeries series_log(const WordSeries& t);
WordSeries series_exp(const WordSeries& p);

// 1 + XY + XYXY + ... through the cutoff
WordSeries transmission_series(int max_degree);
// -ln T through max_degree; the cap guards runaway requests
WordSeries logT_expansion(int max_degree, int cap = 8);

bool check_primitive(const WordSeries& p, int degree);

std::string to_string(const Rational& q);

}  // namespace iscat::hopf
