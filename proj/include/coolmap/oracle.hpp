#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "coolmap/cooling.hpp"
#include "coolmap/random.hpp"

namespace coolmap {

struct SamplerConfig {
    std::uint64_t seed = 1;
    std::size_t dim = 2;
    std::size_t n_diag = 0; // 0: drawn uniformly from 1..dim per sample
    std::size_t trials = 1000;
    double resolution = 1e-3;
};

/// Every column k carries an independent uniform unit vector of dimension
/// n_diag + k - 1 split into (lambda_k, mu_1k, ..., mu_{k-1,k}).
CoolingMap random_cooling_map(std::size_t d, std::size_t n_diag, Rng& rng);
CoolingMap random_cooling_map(const SamplerConfig& cfg);

/// Kraus operators (1 x <e_i|) V of a random isometry V : C^d -> C^d x C^r
/// whose first column is |E_1>|e_1>.
KrausSet random_gp_channel(std::size_t d, std::size_t r, Rng& rng);
KrausSet random_gp_channel(const SamplerConfig& cfg);

/// Seed of trial `trial` in a campaign seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

struct FuzzCase {
    CoolingMap map;
    DensityMatrix rho;
    DensityMatrix sigma;
};

/// The (map, state, image) triple of one fuzz trial; n_diag 0 draws it.
FuzzCase make_fuzz_case(std::uint64_t seed, std::size_t d, std::size_t n_diag, const ToleranceSet& tol = {});

struct FuzzViolation {
    std::size_t trial = 0;
    std::uint64_t seed = 0; // pass to make_fuzz_case to reproduce
    std::string kind;
    std::string detail;
};

struct FuzzReport {
    std::size_t trials = 0;
    std::vector<FuzzViolation> violations; // sorted by trial
    double max_coherence_excess = 0.0;
    std::size_t rank_one_trials = 0;
    double max_rank_one_gap = 0.0;
};

using Decider = std::function<Decision(const DensityMatrix&, const DensityMatrix&)>;

/// Runs cfg.trials trials of (random map, random full-rank state) and checks
/// that the decider accepts the image, that the coherence bound holds and that
/// it is tight on rank-one maps. The default decider is decide_transition.
FuzzReport necessity_fuzz(const SamplerConfig& cfg, const ToleranceSet& tol = {}, Decider decider = {});

enum class Model { Cooling, Gp };

std::string model_name(Model m);

struct RegionPoint {
    Model model = Model::Cooling;
    double y = 0.0;    // |sigma_12|
    double beta = 0.0; // sigma_11
};

/// cfg.trials samples per model applied to a qubit state.
std::vector<RegionPoint> reachable_region_scan(const DensityMatrix& rho, const SamplerConfig& cfg);

/// Keeps, per model and grid cell over [0, 1] x [0, 1/2], the sampled point
/// with the largest y.
std::vector<RegionPoint> bin_region(const std::vector<RegionPoint>& points, std::size_t bins = 200);

/// Largest coherence reachable from [[1/2, x], [x, 1/2]] at population beta.
double cooling_boundary(double x, double beta);
double gp_boundary(double x, double beta);

/// Whether some column-stochastic M with M g = g maps u to within
/// cfg.resolution of v (Euclidean). Exact for d <= 3 via the vertices of the
/// Gibbs-fixing transport polytope.
bool thermo_stochastic_oracle(const ProbabilityVector& u, const ProbabilityVector& v, const GibbsDistribution& g,
                              const SamplerConfig& cfg);

} // namespace coolmap
