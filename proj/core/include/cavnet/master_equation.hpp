#ifndef CAVNET_MASTER_EQUATION_HPP
#define CAVNET_MASTER_EQUATION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cavnet/linear_response.hpp"
#include "cavnet/rates.hpp"

namespace cavnet {

/// Photon cutoffs for the three modes; each cavity holds one two-level atom.
struct TruncatedHilbertSpec {
    int n1_max = 1;
    int n2_max = 1;
    int nb_max = 1;

    static constexpr std::size_t kMaxDimension = 4096;

    std::size_t dimension() const;
    void validate() const;
};

enum class SteadyStateMethod {
    NullSpace,           // sparse LU
    NullSpaceIterative,  // preconditioned BiCGSTAB
    Propagation,
};

struct LindbladOptions {
    // Largest Hilbert dimension solved by sparse LU on the Liouvillian.
    std::size_t direct_dimension_limit = 32;
    // Above the LU limit and up to this one the null space is found
    // iteratively; larger spaces are propagated in time.
    std::size_t null_space_dimension_limit = 1024;
    double krylov_tolerance = 1e-13;  // relative residual
    int krylov_max_iterations = 2000;
    double propagation_tolerance = 1e-10;  // on max |d<a_i>/dt|
    double max_propagation_time = 1e4;     // microseconds / (2 pi)
};

struct LindbladResult {
    complex a1{}, a2{}, b{};
    complex sigma1{}, sigma2{};
    double n1 = 0.0, n2 = 0.0, nb = 0.0;

    double trace_defect = 0.0;        // |Tr rho - 1|
    double hermiticity_defect = 0.0;  // max |rho - rho^dagger|
    double min_population = 0.0;      // smallest diagonal entry
    bool truncation_ok = true;        // photon numbers < 0.1 * cutoff
    SteadyStateMethod method = SteadyStateMethod::NullSpace;
    std::vector<std::string> warnings;
    Eigen::MatrixXcd rho;
};

/// Steady state of
///   d rho/dt = -i[H, rho] + sum_k kappa'_k D[a_k] + (gamma_par/2) sum_l D[sigma_l]
///              + gamma_las (sum_k D[a_k^dag a_k] + sum_l D[sigma_l^+ sigma_l^-])
/// with D[O] rho = 2 O rho O^dag - O^dag O rho - rho O^dag O, kappa'_k the
/// cavity damping without gamma_las, and H the coupled network plus a
/// coherent drive E (a + a^dag) on the driven mode, in the probe frame.
/// Throws InvalidParameter on the dimension guard.
LindbladResult lindblad_steady_state(const TruncatedHilbertSpec& spec, const ModelRates& rates,
                                     double g1, double g2, const DriveSpec& drive,
                                     const LindbladOptions& options = {});

}  // namespace cavnet

#endif  // CAVNET_MASTER_EQUATION_HPP
