#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hilbert/group.hpp"
#include "hilbert/metric.hpp"

namespace hilbert {

enum class EntropyMethod { volume_growth, orbit_counting, ruelle_bound };
std::string method_name(EntropyMethod m);

struct EntropyEstimate {
  double value = 0;
  EntropyMethod method = EntropyMethod::volume_growth;
  std::vector<double> grid;   // radii or length cutoffs
  std::vector<double> curve;  // ball volumes or orbit counts on the grid
  double fit_stderr = 0;
  double window_lo = 0, window_hi = 0;
  int count = 0;  // samples or closed orbits
  std::string convention;
};

struct VolumeEntropyOptions {
  int batches = 8;
  double cell_width = 0.25;  // Hilbert-radius width of a radial stratum
  std::uint64_t seed = 1;
  // Planar polygons: exact densities, sampled over boundary arclength with log-uniform
  // spacing toward the vertices.
  bool polygon_route = true;
};

// Ball volumes by stratified sampling in Hilbert-polar coordinates around x0.
EntropyEstimate volume_entropy(const MetricContext& ctx, const Vec& x0, double r_max, int samples,
                               const VolumeEntropyOptions& opts = {});

// Exponential growth of closed orbits from the translation-length spectrum. Counts follow
// Ei(hT) + c on the upper half of the complete length window.
EntropyEstimate orbit_entropy(const std::vector<GroupElement>& generators, int max_len,
                              const std::optional<CoxeterPresentation>& presentation = {});

// Same, from a precomputed spectrum with the largest complete cutoff.
EntropyEstimate orbit_entropy_from_spectrum(std::vector<double> lengths, double complete_up_to);

double ruelle_bound(int n, const std::vector<double>& eta_samples);

void write_entropy_csv(std::ostream& os, const EntropyEstimate& e);

}  // namespace hilbert
