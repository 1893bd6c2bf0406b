#pragma once

#include <span>
#include <string_view>

namespace treelip {

// Stable identifiers for the results that verdicts rely on. Every verdict
// in a report names one of these; docs/theorem_keys.md documents each.
struct TheoremKey {
  std::string_view key;
  std::string_view statement;
};

std::span<const TheoremKey> theorem_keys();
bool is_theorem_key(std::string_view key);

namespace keys {
inline constexpr std::string_view kLipschitzNumber = "lipschitz-number";
inline constexpr std::string_view kFiniteSupportDensity = "finite-support-density";
inline constexpr std::string_view kLocalizedExtension = "localized-extension";
inline constexpr std::string_view kBoundedFiniteNonconstantSet = "bounded-finite-nonconstant-set";
inline constexpr std::string_view kBoundedFiniteFibers = "bounded-finite-fibers";
inline constexpr std::string_view kBoundedLengthDivergence = "bounded-length-divergence";
inline constexpr std::string_view kBoundedNonconstantDivergence = "bounded-nonconstant-divergence";
inline constexpr std::string_view kUnboundedPreimageAccumulation = "unbounded-preimage-accumulation";
inline constexpr std::string_view kBoundednessOpen = "boundedness-scan-inconclusive";
inline constexpr std::string_view kNormBounds = "norm-bounds";
inline constexpr std::string_view kPointSpectrumDisk = "point-spectrum-disk";
inline constexpr std::string_view kConstantMapSpectrum = "constant-map-point-spectrum";
inline constexpr std::string_view kNonSurjectiveZero = "non-surjective-zero-eigenvalue";
inline constexpr std::string_view kConstantEigenfunction = "constant-eigenfunction";
inline constexpr std::string_view kGeometricEigenfunction = "geometric-eigenfunction";
inline constexpr std::string_view kPathPowerEigenfunction = "path-power-eigenfunction";
inline constexpr std::string_view kDenseRangeInsideDisk = "dense-range-inside-disk";
inline constexpr std::string_view kDenseRangeOutsideDisk = "dense-range-outside-disk";
inline constexpr std::string_view kDenseRangeFinitePreimages = "dense-range-finite-preimages";
inline constexpr std::string_view kNoninjectiveNotDenseRange = "noninjective-not-dense-range";
inline constexpr std::string_view kInjectiveApproximateSpectrum = "injective-approximate-spectrum";
inline constexpr std::string_view kSpectralRadiusBound = "spectral-radius-bound";
inline constexpr std::string_view kPeriodicPointObstruction = "periodic-point-obstruction";
inline constexpr std::string_view kNoninjectiveNotHypercyclic = "noninjective-not-hypercyclic";
inline constexpr std::string_view kBoundedSeparationObstruction = "bounded-separation-obstruction";
inline constexpr std::string_view kRunAwayBound = "run-away-bound";
inline constexpr std::string_view kMixingPreimageFinite = "mixing-preimage-finite";
inline constexpr std::string_view kMixingEventualGrowth = "mixing-eventual-growth";
inline constexpr std::string_view kGrowthImpliesFinitePreimages = "growth-implies-finite-preimages";
inline constexpr std::string_view kMixingSeparationTents = "mixing-separation-tents";
inline constexpr std::string_view kHypercyclicityOpen = "hypercyclicity-open-gap";
}  // namespace keys

}  // namespace treelip
