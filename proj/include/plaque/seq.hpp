#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace plaque::seqlat {

// Binary sequences are 1-based: position n >= 1 carries a bit. Two sequences
// are almost equal when they differ in finitely many positions; TailClass is
// the class of an eventually periodic sequence under that relation.

struct EventuallyPeriodicSequence {
  std::string preperiod;  // bits at positions 1..s
  std::string period;     // bits repeating from position s+1 on; length >= 1

  // Bit at 1-based position n of the concrete representative.
  char bit_at(long long n) const;
};

// Minimal-period word over absolute residues: bit(n) = word[(n-1) mod p].
// Residue alignment is absolute (global position), so the class of a sequence
// does not depend on its preperiod length.
class TailClass {
 public:
  TailClass();  // bottom <1;0>
  TailClass(int period, std::vector<uint8_t> word);  // canonicalizes

  static TailClass zero();
  static TailClass one();
  static TailClass parse(const std::string& text);  // "p=K;w=b1..bK"

  int period() const { return period_; }
  const std::vector<uint8_t>& word() const { return word_; }
  uint8_t bit_at(long long pos) const;  // pos >= 1
  bool is_zero() const;
  bool is_one() const;
  long long ones_per_period() const;
  // 1-based position of the n-th 1 of the canonical periodic representative.
  long long nth_one_position(long long n) const;

  std::string to_string() const;  // "p=K;w=..."

  bool operator==(const TailClass&) const = default;

 private:
  int period_;
  std::vector<uint8_t> word_;
};

// Deterministic total order (period, then word), used for normal forms only;
// it is unrelated to the lattice order.
bool lex_less(const TailClass& a, const TailClass& b);

TailClass canonicalize(const EventuallyPeriodicSequence& s);

TailClass join(const TailClass& a, const TailClass& b);
TailClass meet(const TailClass& a, const TailClass& b);
TailClass negate(const TailClass& a);
// b <= a in the Boolean algebra order: join(a, b) == a.
bool leq(const TailClass& b, const TailClass& a);
// m >= 0 prepends m zero entries, m < 0 deletes entries; a class map since
// almost-equality absorbs the finite prefix.
TailClass shift_class(const TailClass& a, long long m);
// Class of the sequence with 1 exactly at positions n, 2n, 3n, ...
TailClass sq_class(long long n);

// Finitely generated element of the signature lattice A: a nonempty antichain
// {a_1,...,a_k} denoting the union of the principal downsets alpha(a_i).
class Signature {
 public:
  Signature();  // bottom {alpha(0)}
  explicit Signature(std::vector<TailClass> generators);  // normalizes

  static Signature bottom();
  static Signature top();
  static Signature principal(const TailClass& a);  // {alpha(a)}
  static Signature parse(const std::string& text);

  const std::vector<TailClass>& generators() const { return gens_; }
  bool is_bottom() const;
  std::string to_string() const;  // generators joined by ';'

  bool operator==(const Signature&) const = default;

 private:
  std::vector<TailClass> gens_;  // sorted antichain, never empty
};

Signature sig_union(const Signature& s, const Signature& t);
Signature sig_intersect(const Signature& s, const Signature& t);
bool sig_contains(const Signature& s, const TailClass& b);
Signature sig_shift(const Signature& s, long long m);
// Subset order on denoted sets: every generator of s lies below some
// generator of t.
bool sig_leq(const Signature& s, const Signature& t);

// Detection of the finite reduction guaranteed for principal countable meets:
// partial meets t'_n = t_1 ^ ... ^ t_n over the first `window` entries.
struct MeetChainResult {
  bool stabilized;
  int index;        // first n with t'_n = ... = t'_window (when stabilized)
  TailClass value;  // stabilized meet, or the last partial meet otherwise
};
MeetChainResult meet_chain_reduce(const std::vector<TailClass>& ts, int window);

// First K one-positions of the diagonal sequence z whose n-th 1 sits at the
// n-th one-position of the n-th partial meet. Throws if a partial meet hits
// bottom (no witness exists).
std::vector<long long> diagonal_witness(const std::vector<TailClass>& ts, int K);

}  // namespace plaque::seqlat
