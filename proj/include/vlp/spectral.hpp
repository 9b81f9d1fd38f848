#pragma once

#include <utility>
#include <vector>

#include "vlp/grid.hpp"
#include "vlp/transform.hpp"

namespace vlp {

/// Subset A of [0, M), stored as a sorted list of disjoint nonempty
/// half-open intervals.  Singletons are length-1 intervals.
class FrequencySet {
  public:
    FrequencySet() = default;
    static FrequencySet range(std::int64_t a, std::int64_t b);
    static FrequencySet single(std::int64_t n);
    static FrequencySet from_intervals(std::vector<IntervalZ> parts);
    /// All n in [0, M) whose level-`k` frequency digit lies in [jlo, jhi].
    static FrequencySet digit_arc(const RadixSequence& radix, int k, std::int64_t jlo,
                                  std::int64_t jhi);

    bool contains(std::int64_t n) const;
    std::int64_t cardinality() const;
    bool empty() const { return parts_.empty(); }
    std::int64_t max_bound() const { return parts_.empty() ? 0 : parts_.back().b; }
    bool intersects(const FrequencySet& other) const;
    const std::vector<IntervalZ>& parts() const { return parts_; }

  private:
    std::vector<IntervalZ> parts_;
};

/// P_A f: zero the Vilenkin coefficients outside A.
GridFunction project(const GridFunction& f, const FrequencySet& A);
Spectrum project(const Spectrum& s, const FrequencySet& A);

/// Conditional expectation E_k, computed by averaging over the F_k atoms.
/// Coincides with project(f, [0, m_k)); the projector route is kept as
/// expectation_projector so the two can be compared.
GridFunction expectation(const GridFunction& f, int k);
GridFunction expectation_projector(const GridFunction& f, int k);

/// Martingale difference Delta_k = E_{k+1} - E_k = P_{[m_k, m_{k+1})}.
GridFunction delta(const GridFunction& f, int k);
/// Delta_{k,l} = P_{[l m_k, (l+1) m_k)}.  Total in l: Delta_{k,0} = E_k
/// and Delta_{k,u} = Delta_{k, u mod p_k} for u outside [0, p_k).
GridFunction delta_kl(const GridFunction& f, int k, std::int64_t l);

/// Q_{j,beta} = sum of the beta highest blocks Delta_{j,p_j-beta} ... Delta_{j,p_j-1}.
GridFunction q_block(const GridFunction& h, int j, std::int64_t beta);

/// Pointwise multiplication by the character w_b.
GridFunction multiply_char(const GridFunction& f, std::int64_t b);

/// One row of a G-operator plan: the modulation frequency b_s and the
/// blocks (j, beta_{js}) for j in Theta_s.
struct GPlanRow {
    std::int64_t b = 0;
    std::vector<std::pair<int, std::int64_t>> blocks;
};
using GPlan = std::vector<GPlanRow>;

/// G f = ( sum_{j in Theta_s} Q_{j,s}[w_{b_s}^{-1} f] )_s
VectorGridFunction g_forward(const GridFunction& f, const GPlan& plan);
/// G* h = sum_s w_{b_s} sum_{j in Theta_s} Q_{j,s} h_s
GridFunction g_star(const VectorGridFunction& h, const GPlan& plan);

/// x -> ( sum_s |P_{A_s} f(x)|^2 )^{1/2}.  The family must be pairwise
/// disjoint; overlap is a hypothesis violation and is rejected.
GridFunction square_function(const GridFunction& f, const std::vector<FrequencySet>& family);

/// Diagonal multiplier Q_{t,s}^{kappa,r} in the Vilenkin basis:
/// coefficients with tail kappa are scaled by phi(n_t / 2^r - n_ref),
/// everything else is zeroed.
struct SmoothMultiplierSpec {
    int level = 0;          // t
    std::int64_t kappa = 0; // frozen digits above t (digits <= t must be zero)
    int r = 0;              // dyadic scale >= 0
    std::int64_t n_ref = 0; // n_{t,s}^{kappa,r}
};

GridFunction smooth_multiplier(const GridFunction& f, const SmoothMultiplierSpec& spec);
/// Q~ drops the w_kappa factor: Q~ f = w_kappa^{-1} Q f.
GridFunction q_tilde(const GridFunction& f, const SmoothMultiplierSpec& spec);
/// R: per-atom modulation exp(-2 pi i 2^r n_ref a_t(x) / p_t) applied to g.
GridFunction r_modulate(const GridFunction& g, const SmoothMultiplierSpec& spec);

}  // namespace vlp
