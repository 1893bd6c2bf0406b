#include "treelip/theorem_keys.hpp"

#include <algorithm>
#include <array>

namespace treelip {

namespace {

constexpr std::array kKeys{
    TheoremKey{keys::kLipschitzNumber,
               "phi is Lipschitz iff sup over non-root v of dist(phi(v), phi(v^-)) is finite; that sup is lambda_phi"},
    TheoremKey{keys::kFiniteSupportDensity, "finitely supported functions are dense in Lip0"},
    TheoremKey{keys::kLocalizedExtension,
               "cutting f off below a level with a linear ramp of length m does not increase ||f||_Lip "
               "when max |f| on that level is at most m ||f||_Lip"},
    TheoremKey{keys::kBoundedFiniteNonconstantSet,
               "phi Lipschitz and A = {v : phi not constant on S_v} finite => C_phi bounded on Lip0"},
    TheoremKey{keys::kBoundedFiniteFibers,
               "phi Lipschitz with finite fibers (e.g. injective) => C_phi bounded on Lip0"},
    TheoremKey{keys::kBoundedLengthDivergence, "phi Lipschitz and |phi(v)| -> infinity => C_phi bounded on Lip0"},
    TheoremKey{keys::kBoundedNonconstantDivergence,
               "phi Lipschitz and |phi(v)| -> infinity along A => C_phi bounded on Lip0"},
    TheoremKey{keys::kUnboundedPreimageAccumulation,
               "if phi^-1({w}) meets A in infinitely many vertices then chi_w o phi is not in Lip0"},
    TheoremKey{keys::kBoundednessOpen,
               "neither certified facts nor a finite refutation witness settle boundedness on this window"},
    TheoremKey{keys::kNormBounds, "1 + |phi(root)| <= ||C_phi|| <= max{1 + |phi(root)|, lambda_phi}"},
    TheoremKey{keys::kPointSpectrumDisk,
               "for nonconstant Lipschitz phi, the point spectrum lies in the closed disk of radius lambda_phi"},
    TheoremKey{keys::kConstantMapSpectrum, "for constant phi the point spectrum is {0, 1}"},
    TheoremKey{keys::kNonSurjectiveZero, "w outside im(phi) gives C_phi chi_w = 0, so 0 is an eigenvalue"},
    TheoremKey{keys::kConstantEigenfunction, "C_phi 1 = 1 for every phi"},
    TheoremKey{keys::kGeometricEigenfunction,
               "phi injective, w outside im(phi), |lambda| < 1: f = sum lambda^n chi_{phi^n(w)} is an eigenfunction"},
    TheoremKey{keys::kPathPowerEigenfunction,
               "on N0 with phi(m) = 2m+1, f(m) = (m+1)^mu with 2^mu = lambda satisfies C_phi f = lambda f"},
    TheoremKey{keys::kDenseRangeInsideDisk,
               "phi injective, |lambda| < 1: (C_phi - lambda) f = chi_w for f = sum lambda^(n-1) chi_{phi^n(w)}"},
    TheoremKey{keys::kDenseRangeOutsideDisk,
               "|lambda| > 1: (C_phi - lambda) f = chi_w for f = -sum lambda^-(n+1) chi_{phi^-n({w})}"},
    TheoremKey{keys::kDenseRangeFinitePreimages,
               "lambda != 0 and phi^-N({w}) empty: the finite sum -sum_{n<N} lambda^-(n+1) chi_{phi^-n({w})} "
               "solves (C_phi - lambda) f = chi_w"},
    TheoremKey{keys::kNoninjectiveNotDenseRange, "phi not injective => C_phi lacks dense range, 0 in the compression spectrum"},
    TheoremKey{keys::kInjectiveApproximateSpectrum,
               "phi injective => compression spectrum inside the unit circle and spectrum = approximate point spectrum"},
    TheoremKey{keys::kSpectralRadiusBound,
               "r(C_phi) = lim ||C_phi^n||^(1/n) <= max{1 + |phi^n(root)|, lambda_{phi^n}}^(1/n)"},
    TheoremKey{keys::kPeriodicPointObstruction, "a periodic point of phi rules out hypercyclicity of lambda C_phi"},
    TheoremKey{keys::kNoninjectiveNotHypercyclic, "phi not injective => lambda C_phi is not hypercyclic"},
    TheoremKey{keys::kBoundedSeparationObstruction,
               "if lambda^n dist(phi^n(w), phi^n(w^-)) is bounded for some w then lambda C_phi is not hypercyclic"},
    TheoremKey{keys::kRunAwayBound,
               "without periodic points, phi^j(K) meets K for at most |K|^2 - |K| positive j"},
    TheoremKey{keys::kMixingPreimageFinite,
               "phi injective without periodic points and {n : phi^-n({v}) nonempty} finite for all v "
               "=> lambda C_phi mixing for |lambda| > 1"},
    TheoremKey{keys::kMixingEventualGrowth,
               "phi injective and |v| < |phi(v)| for |v| >= N => lambda C_phi mixing for |lambda| > 1"},
    TheoremKey{keys::kGrowthImpliesFinitePreimages,
               "phi injective without periodic points and eventually length increasing => "
               "{n : phi^-n({v}) nonempty} finite for every v"},
    TheoremKey{keys::kMixingSeparationTents,
               "|lambda| <= 1, |lambda|^n m(n,v) -> infinity, |phi^n(v)| + c >= m(n,v) (and finite preimage times "
               "when |lambda| = 1) => lambda C_phi mixing"},
    TheoremKey{keys::kHypercyclicityOpen, "no known condition decides hypercyclicity from the scanned evidence"},
};

}  // namespace

std::span<const TheoremKey> theorem_keys() { return kKeys; }

bool is_theorem_key(std::string_view key) {
  return std::any_of(kKeys.begin(), kKeys.end(), [&](const TheoremKey& k) { return k.key == key; });
}

}  // namespace treelip
