#pragma once

#include <string>
#include <vector>

#include "phigeo/types.hpp"

namespace phigeo {

// Sector alphabet: h is a hyperbolic sector (fixed angular measure
// 2*pi/(n+2) at a singularity of order n), p a parabolic sector with a free
// positive angular measure.
enum class Symbol : unsigned char { H = 0, P = 1 };

// Cyclic word over {h, p} read off clockwise around a singularity of order n,
// with one positive weight attached to every p.  Words compare and combine up
// to cyclic rotation; the h-weight bookkeeping is exact (integer count of
// 2*pi/(n+2) quanta), only the p-weights are floating point.
class SectorWord {
 public:
  // `pattern` spells the symbols, e.g. "hph"; `p_weights` lists one weight
  // per 'p' in pattern order (radians).
  SectorWord(const std::string& pattern, int order,
             std::vector<double> p_weights = {});
  SectorWord(std::vector<Symbol> symbols, int order,
             std::vector<double> p_weights);

  int order() const { return order_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const std::vector<double>& p_weights() const { return p_weights_; }
  size_t size() const { return symbols_.size(); }
  int h_count() const;
  int p_count() const;
  std::string pattern() const;  // "hph"

 private:
  void validate() const;

  std::vector<Symbol> symbols_;
  std::vector<double> p_weights_;
  int order_ = 1;
};

// Total angular measure: h_count * 2*pi/(n+2) + sum of p-weights.
double weight(const SectorWord& w);

// A word is normalized when its weight is a full turn.  Exact for pure-h
// words (h_count == n+2); within 1e-9 otherwise.
bool is_normalized(const SectorWord& w);

// Canonical representative of the cyclic class: adjacent p's merged
// (cyclically, weights added), then the lexicographically least rotation
// with h < p, ties broken toward the largest leading p-weight.
SectorWord canonical_form(const SectorWord& w);

// Cyclic equality with p-weights compared within 1e-9.  Throws
// Errc::incomparable when the orders differ.
bool equivalent(const SectorWord& a, const SectorWord& b);

// Index of the singularity of a foliation exhibiting the word:
// 1 - h_count/2, except the bare word "p" which has index +1.
// Requires a normalized word (Errc::precondition otherwise).
HalfInteger index(const SectorWord& w);

// Smallest order n >= 1 at which the word can be realized: pure-h words need
// n = h_count - 2 exactly (unrealizable when h_count <= 2); words with at
// least one p need only h_count * 2*pi/(n+2) < 2*pi, i.e. n = max(1,
// h_count - 1).
int min_order_realizing(const SectorWord& w);

// A concrete angular layout around the singularity.  Sectors partition the
// circle; `sectors[i]` spans [start_angle, start_angle + sweep) with angles
// counterclockwise in [0, 2*pi).  The listing order follows the word, i.e.
// runs clockwise around the circle.
struct SectorDescriptor {
  Symbol type = Symbol::H;
  double start_angle = 0.0;
  double sweep = 0.0;
};

struct SectorLayout {
  int order = 1;
  std::vector<SectorDescriptor> sectors;
};

// Realize the (canonicalized) word at order n: h-sectors take their fixed
// sweep 2*pi/(n+2) and the p-weights are rescaled proportionally so the
// sweeps fill the full turn.  Throws Errc::unrealizable when n is
// inadmissible for the word.
SectorLayout realize(const SectorWord& w, int order);

// "n=2 h p(1.5708) h" with shortest round-trip weight formatting.
std::string word_to_string(const SectorWord& w);
SectorWord word_from_string(const std::string& text);

}  // namespace phigeo
