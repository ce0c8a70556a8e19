#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "openbook/solve.hpp"

namespace openbook {

struct MorseRecord {
  std::vector<double> point;
  double value = 0.0;
  int index = 0;
  enum class Location { Interior, BoundaryInward };
  Location location = Location::Interior;
};

struct MorseOutcome {
  int chi = 0;
  std::vector<MorseRecord> records;
  int functionals_tried = 1;
};

// Euler characteristic of the compact regular level set {constraints = 0}
// (world constraints included by the caller) by critical-point counting of
// a generic linear functional: chi = sum (-1)^index. Dimension 0 falls back
// to point counting, negative dimension to an emptiness check. The
// functional is re-randomized up to 5 times on degeneracy; odd-dimensional
// results are cross-checked against 0.
MorseOutcome morse_chi_closed(const std::vector<Polynomial>& constraints,
                              double sample_radius, std::uint64_t seed,
                              int n_starts = 300);

// Same for the region {constraints = 0, barrier >= delta}: interior
// critical points plus boundary critical points whose objective gradient
// points into {barrier > delta}.
MorseOutcome morse_chi_boundary(const std::vector<Polynomial>& constraints,
                                const Polynomial& barrier, double delta,
                                double sample_radius, std::uint64_t seed,
                                int n_starts = 300);

struct CurveChi {
  int chi = 0;
  int arcs = 0;
  int loops = 0;
  std::size_t cloud_size = 0;
};

// Brute-force oracle for compact 1-dimensional solution sets: a dense
// multistart cloud is thinned and linked into polylines; arcs count 1,
// loops 0. Rejects sparse clouds and ambiguous linkings.
CurveChi curve_chi_oracle(const PolySystem& sys, const SamplerSpec& sampler,
                          int density, std::uint64_t seed);

// Parity table for chi(V_W(f_I)) with #I = l on an (n-1)-sphere world:
// n even: 2*chi_fiber (l odd) or 0 (l even);
// n odd: chi_W - 2*chi_fiber (l odd) or chi_W (l even).
long long predict_link_chi(long long chi_fiber, long long chi_W, int n, int l);

// Inverts the l=1 relation chi(V_W(f_j)) = chi_W - (-1)^(n-1) 2 chi(M_F);
// throws on parity violation (odd difference signals an upstream chi error).
long long invert_fiber_chi(long long chi_link_j, long long chi_W, int n);

struct ChiValue {
  long long value = 0;
  std::string provenance;  // morse | boundary | oracle | inverted | inclusion-exclusion | claimed
};

struct IdentityCheck {
  std::string name;
  std::string inputs;  // which chi values fed the two sides
  long long lhs = 0;
  long long rhs = 0;
  bool pass = false;
  bool informational = false;  // singular instances are reported, not enforced
};

struct ChiInputs {
  int n = 0;  // sphere world in R^n
  int p = 0;
  std::optional<ChiValue> chi_W;
  std::map<std::vector<std::size_t>, ChiValue> links;  // keyed by sorted 1-based index sets
  std::optional<ChiValue> fiber;                       // directly computed chi(M_F)
  std::map<std::string, long long> claimed;            // externally claimed values by chi key
  std::set<std::vector<std::size_t>> singular;         // index sets with singular V_W(f_I)
};

struct ChiReport {
  int n = 0;
  int p = 0;
  std::map<std::string, ChiValue> chis;  // "W", "fiber", "link[i,j,...]"
  std::optional<long long> fiber_chi;    // preferred value (inverted when available)
  std::string fiber_provenance;
  std::vector<IdentityCheck> identities;
  std::vector<std::string> disputes;  // claimed-vs-computed mismatches, never overwritten
  bool algebraic_pass = true;         // all non-informational identities hold

  std::string to_text() const;
};

std::string chi_key(const std::vector<std::size_t>& index_set);

// Evaluates every applicable identity between the supplied chi values:
// single-link inversion agreement, drop-one differences, skip-two
// equalities, the parity table, and the direct-fiber cross-check. Claimed
// values are compared and disputes recorded without affecting the verdict.
ChiReport consistency_report(const ChiInputs& in);

} // namespace openbook
