#pragma once

#include "mpx/generator.hpp"
#include "mpx/normal_form.hpp"
#include "mpx/path.hpp"

namespace mpx {

// One eigenmode of A on W_P: z(t) = U S_plane R(lambda t) e_axis / sqrt(tau),
// where S_plane embeds the 2d plane (plane, n+plane) into R^{2n}.
struct WpMode {
  int plane{0};
  int j{0};
  double lambda{0.0};
  int axis{0};  // 0 or 1 within the plane
};

struct WpBasis {
  int n{0};
  int k{0};
  double tau{0.0};
  Mat P;
  ConjugatedForm form;
  std::vector<WpMode> modes;  // zero modes first, then by |lambda|
  int m{0};                   // positive modes retained = negative retained
  int zero_count{0};

  Vec mode_value(int idx, double t) const;  // z_idx(t) in ambient coordinates
};

WpBasis build_wp_basis(const Mat& P, int k, double tau, int m);

// Matrix of the bilinear form of A - B on the basis modes.
Mat assemble_quadratic_form(const GeneratorField& B, const WpBasis& basis);

struct GalerkinSpectrum {
  int m{0};
  double d{0.0};
  Vec eigs;
  int minus{0}, zero{0}, plus{0};
  bool stabilized{false};
};

GalerkinSpectrum count_spectrum(const Mat& form, double d);

struct GalerkinResult {
  long i{0};
  int nu{0};
  bool stabilized{false};
  int stabilized_at{0};
  std::vector<GalerkinSpectrum> audit;
};

struct GalerkinOptions {
  int m_start{64};
  int m_step{32};
  int m_max{512};
  int consecutive{3};
  double d_cap{0.1};
  double sigma_floor{1e-8};
};

GalerkinResult galerkin_index(const GeneratorField& B, const Mat& P, int k,
                              double tau,
                              const GalerkinOptions& opts = GalerkinOptions{});

struct NullitySumCheck {
  long lhs{0};
  long rhs{0};
  bool pass{false};
  std::vector<std::pair<double, int>> crossings;  // (s, nu)
};

// i^P(B2) - i^P(B1) against the summed nullities of the segment
// s -> (1-s) B1 + s B2, s in [0,1). Requires B1 < B2 pointwise.
NullitySumCheck nullity_sum_check(const GeneratorField& B1,
                                  const GeneratorField& B2, const Mat& P,
                                  int k, double tau, int grid = 48,
                                  const GalerkinOptions& opts =
                                      GalerkinOptions{});

}  // namespace mpx
