#pragma once

#include <memory>

#include "cfb/bundles.hpp"
#include "cfb/kcontact.hpp"

namespace cfb::scenarios {

/// Hopf bundle S1 -> S3 -> S2 with connection A = alpha_std / 2
/// (normalized so that A reproduces the circle generator).
struct HopfBundle {
  geom::EmbeddedManifold total = geom::sphere(4);
  geom::EmbeddedManifold base = geom::sphere(3);
  lie::MatrixLieGroup group = lie::torus_group(1);
  lie::GroupAction action;
  bundles::PrincipalBundle bundle;

  HopfBundle();
  HopfBundle(const HopfBundle&) = delete;
  HopfBundle& operator=(const HopfBundle&) = delete;
};

/// Flat control: the product S2 x S1 with the product connection.
struct TrivialCircleBundle {
  geom::EmbeddedManifold total;
  geom::EmbeddedManifold base = geom::sphere(3);
  lie::MatrixLieGroup group = lie::torus_group(1);
  lie::GroupAction action;
  bundles::PrincipalBundle bundle;

  TrivialCircleBundle();
  TrivialCircleBundle(const TrivialCircleBundle&) = delete;
  TrivialCircleBundle& operator=(const TrivialCircleBundle&) = delete;
};

/// T^2-bundle over S2 modeled on S3 x S1: the fiber product of two copies of
/// the Hopf bundle (twisted = both curvature components equal the Hopf
/// form), or the untwisted control whose second factor is flat.
struct FiberProductBundle {
  geom::EmbeddedManifold total;
  geom::EmbeddedManifold base = geom::sphere(3);
  lie::MatrixLieGroup group = lie::torus_group(2);
  lie::GroupAction action;
  bundles::PrincipalBundle bundle;

  explicit FiberProductBundle(bool twisted);
  FiberProductBundle(const FiberProductBundle&) = delete;
  FiberProductBundle& operator=(const FiberProductBundle&) = delete;
};

/// An associated contact bundle with ellipsoid fiber E_a and the diagonal
/// torus action matching the structure group of the given bundle.
struct AssociatedScenario {
  geom::EmbeddedManifold fiber;
  forms::OneFormField alpha_F;
  lie::GroupAction fiber_action;
  bundles::AssociatedContactBundle assoc;

  AssociatedScenario(const bundles::PrincipalBundle& bundle, const Vec& ellipsoid_params,
                     uint64_t invariance_seed = 1);
  AssociatedScenario(const AssociatedScenario&) = delete;
  AssociatedScenario& operator=(const AssociatedScenario&) = delete;
};

/// Moment covectors for the fatness domain: images of fiber samples plus the
/// simplex vertices (the extreme fiber points z_j-axis only).
std::vector<lie::CoadjointElement> moment_image_set(const AssociatedScenario& scen,
                                                    int fiber_samples, uint64_t seed);

/// Product samples with a fixed fiber point appended to every listed
/// p-sample (used to probe degenerate loci deterministically).
geom::SampleSet product_samples_with_fiber_probe(const bundles::AssociatedContactBundle& assoc,
                                                 int count, uint64_t seed,
                                                 const Vec& probe_fiber);

/// Hopf projection as a jet-evaluable map R^4 -> R^3.
geom::SmoothMap hopf_map();

}  // namespace cfb::scenarios
