#include "cavnet/master_equation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "cavnet/errors.hpp"

namespace cavnet {

namespace {

using SpMat = Eigen::SparseMatrix<complex>;
using Triplet = Eigen::Triplet<complex>;
using VecC = Eigen::VectorXcd;

constexpr complex kI{0.0, 1.0};

SpMat identity(int n) {
    SpMat m(n, n);
    m.setIdentity();
    return m;
}

SpMat kron(const SpMat& a, const SpMat& b) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (int ca = 0; ca < a.outerSize(); ++ca) {
        for (SpMat::InnerIterator ia(a, ca); ia; ++ia) {
            for (int cb = 0; cb < b.outerSize(); ++cb) {
                for (SpMat::InnerIterator ib(b, cb); ib; ++ib) {
                    t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                   ia.value() * ib.value());
                }
            }
        }
    }
    SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

SpMat annihilation(int cutoff) {
    SpMat m(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) m.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
    m.makeCompressed();
    return m;
}

SpMat lowering() {
    SpMat m(2, 2);
    m.insert(0, 1) = 1.0;  // |g><e|, ground state first
    m.makeCompressed();
    return m;
}

// Subsystem order: atom 1, atom 2, cavity 1, cavity 2, fiber.
struct Operators {
    SpMat s1, s2, a1, a2, b;
    int dim = 0;
};

Operators build_operators(const TruncatedHilbertSpec& spec) {
    const int dims[5] = {2, 2, spec.n1_max + 1, spec.n2_max + 1, spec.nb_max + 1};
    auto embed = [&](const SpMat& op, int site) {
        SpMat out = site == 0 ? op : identity(dims[0]);
        for (int k = 1; k < 5; ++k) out = kron(out, k == site ? op : identity(dims[k]));
        return out;
    };
    Operators ops;
    ops.s1 = embed(lowering(), 0);
    ops.s2 = embed(lowering(), 1);
    ops.a1 = embed(annihilation(spec.n1_max), 2);
    ops.a2 = embed(annihilation(spec.n2_max), 3);
    ops.b = embed(annihilation(spec.nb_max), 4);
    ops.dim = static_cast<int>(spec.dimension());
    return ops;
}

SpMat adjoint(const SpMat& m) { return SpMat(m.adjoint()); }

// Column-stacked vectorization: vec(A rho B) = (B^T (x) A) vec(rho).
SpMat liouvillian(const SpMat& h, const std::vector<std::pair<double, SpMat>>& channels, int dim) {
    const SpMat id = identity(dim);
    SpMat l = -kI * kron(id, h) + kI * kron(SpMat(h.transpose()), id);
    for (const auto& [rate, op] : channels) {
        if (rate == 0.0) continue;
        const SpMat od = adjoint(op);
        const SpMat odo = od * op;
        l += rate * (2.0 * kron(SpMat(op.conjugate()), op) - kron(id, odo) -
                     kron(SpMat(odo.transpose()), id));
    }
    l.makeCompressed();
    return l;
}

complex expectation(const Eigen::MatrixXcd& rho, const SpMat& op) {
    complex sum{};
    for (int c = 0; c < op.outerSize(); ++c) {
        for (SpMat::InnerIterator it(op, c); it; ++it) sum += it.value() * rho(it.col(), it.row());
    }
    return sum;
}

Eigen::MatrixXcd unvec(const VecC& v, int dim) {
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

// The Liouvillian with rho_00 (vacuum, both atoms down) pinned to 1: its
// equation, redundant under trace preservation, is dropped and its column
// moves to the right-hand side. Unlike a dense trace row this keeps the
// matrix as sparse as L itself.
struct PinnedSystem {
    SpMat m;
    VecC rhs;
};

PinnedSystem pin_vacuum(const SpMat& l) {
    const Eigen::Index n = l.rows() - 1;
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(l.nonZeros()));
    PinnedSystem sys{SpMat(n, n), VecC::Zero(n)};
    for (int c = 0; c < l.outerSize(); ++c) {
        for (SpMat::InnerIterator it(l, c); it; ++it) {
            if (it.row() == 0) continue;
            if (c == 0) {
                sys.rhs(it.row() - 1) = -it.value();
            } else {
                t.emplace_back(it.row() - 1, c - 1, it.value());
            }
        }
    }
    sys.m.setFromTriplets(t.begin(), t.end());
    sys.m.makeCompressed();
    return sys;
}

// Reassembles rho from the pinned solution and normalizes its trace.
// Returns false when the solution is unusable.
bool unpin(const VecC& x, int dim, VecC& out) {
    out.resize(x.size() + 1);
    out(0) = 1.0;
    out.tail(x.size()) = x;
    complex trace{};
    for (int i = 0; i < dim; ++i) trace += out(i + dim * i);
    if (!out.allFinite() || !(std::abs(trace) > 0.0)) return false;
    out /= trace;
    return true;
}

VecC solve_null_space_direct(const SpMat& l, int dim) {
    const PinnedSystem sys = pin_vacuum(l);
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(sys.m);
    lu.factorize(sys.m);
    if (lu.info() != Eigen::Success) {
        throw SingularSystem("Liouvillian factorization failed: " + lu.lastErrorMessage(),
                             std::nan(""));
    }
    VecC v;
    if (!unpin(lu.solve(sys.rhs), dim, v)) {
        throw SingularSystem("Liouvillian steady state has vanishing trace", std::nan(""));
    }
    return v;
}

// LU of the Liouvillian fills in almost completely beyond a few dozen
// states, so larger spaces use incomplete-LU preconditioned BiCGSTAB on the
// same pinned system. Returns false on breakdown or stagnation.
bool solve_null_space_iterative(const SpMat& l, int dim, const LindbladOptions& options,
                                VecC& out) {
    const PinnedSystem sys = pin_vacuum(l);
    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<complex>> solver;
    solver.preconditioner().setFillfactor(2);
    solver.preconditioner().setDroptol(1e-3);
    solver.setTolerance(options.krylov_tolerance);
    solver.setMaxIterations(options.krylov_max_iterations);
    solver.compute(sys.m);
    if (solver.info() != Eigen::Success) return false;
    const VecC x = solver.solve(sys.rhs);
    if (solver.info() != Eigen::Success) return false;
    return unpin(x, dim, out);
}

// Dormand-Prince 5(4) with standard step-size control, from the vacuum
// until every d<a_k>/dt falls below the tolerance.
VecC propagate(const SpMat& l, const Operators& ops, const LindbladOptions& options) {
    static constexpr double c21 = 1.0 / 5.0;
    static constexpr double c31 = 3.0 / 40.0, c32 = 9.0 / 40.0;
    static constexpr double c41 = 44.0 / 45.0, c42 = -56.0 / 15.0, c43 = 32.0 / 9.0;
    static constexpr double c51 = 19372.0 / 6561.0, c52 = -25360.0 / 2187.0,
                            c53 = 64448.0 / 6561.0, c54 = -212.0 / 729.0;
    static constexpr double c61 = 9017.0 / 3168.0, c62 = -355.0 / 33.0, c63 = 46732.0 / 5247.0,
                            c64 = 49.0 / 176.0, c65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    // Fifth- minus fourth-order weights.
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    constexpr double kAbsTol = 1e-12, kRelTol = 1e-9;

    const int dim = ops.dim;
    // Gershgorin bound on the spectrum of L sets the first step.
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(l.rows());
    for (int c = 0; c < l.outerSize(); ++c) {
        for (SpMat::InnerIterator it(l, c); it; ++it) row_sums(it.row()) += std::abs(it.value());
    }
    double dt = 1.0 / std::max(row_sums.maxCoeff(), 1e-12);

    VecC rho = VecC::Zero(l.rows());
    rho(0) = 1.0;  // vacuum, both atoms in the ground state
    VecC k1 = l * rho;
    const SpMat* probes[3] = {&ops.a1, &ops.a2, &ops.b};
    double derivative = 0.0;
    long accepted = 0;
    for (double time = 0.0; time < options.max_propagation_time;) {
        const VecC k2 = l * (rho + dt * c21 * k1);
        const VecC k3 = l * (rho + dt * (c31 * k1 + c32 * k2));
        const VecC k4 = l * (rho + dt * (c41 * k1 + c42 * k2 + c43 * k3));
        const VecC k5 = l * (rho + dt * (c51 * k1 + c52 * k2 + c53 * k3 + c54 * k4));
        const VecC k6 = l * (rho + dt * (c61 * k1 + c62 * k2 + c63 * k3 + c64 * k4 + c65 * k5));
        const VecC next = rho + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const VecC k7 = l * next;
        const VecC err = dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_norm = 0.0;
        for (Eigen::Index i = 0; i < err.size(); ++i) {
            const double scale =
                kAbsTol + kRelTol * std::max(std::abs(rho(i)), std::abs(next(i)));
            err_norm = std::max(err_norm, std::abs(err(i)) / scale);
        }
        const double factor =
            err_norm > 0.0 ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0) : 5.0;
        if (err_norm <= 1.0) {
            time += dt;
            rho = next;
            k1 = k7;  // first-same-as-last
            if (++accepted % 16 == 0) {
                const Eigen::MatrixXcd drho = unvec(k1, dim);
                derivative = 0.0;
                for (const SpMat* op : probes) {
                    derivative = std::max(derivative, std::abs(expectation(drho, *op)));
                }
                if (derivative < options.propagation_tolerance) return rho;
            }
        }
        dt *= factor;
    }
    throw ConvergenceError("master-equation propagation did not reach steady state", derivative);
}

}  // namespace

std::size_t TruncatedHilbertSpec::dimension() const {
    return 4u * static_cast<std::size_t>(n1_max + 1) * static_cast<std::size_t>(n2_max + 1) *
           static_cast<std::size_t>(nb_max + 1);
}

void TruncatedHilbertSpec::validate() const {
    if (n1_max < 0 || n2_max < 0 || nb_max < 0) {
        throw InvalidParameter("photon cutoffs must be non-negative");
    }
    if (dimension() > kMaxDimension) {
        std::ostringstream msg;
        msg << "Hilbert dimension " << dimension() << " exceeds the limit of " << kMaxDimension;
        throw InvalidParameter(msg.str());
    }
}

LindbladResult lindblad_steady_state(const TruncatedHilbertSpec& spec, const ModelRates& rates,
                                     double g1, double g2, const DriveSpec& drive,
                                     const LindbladOptions& options) {
    spec.validate();
    rates.validate();
    const Operators ops = build_operators(spec);
    const int dim = ops.dim;
    const Detunings& d = drive.detuning;

    const SpMat s1d = adjoint(ops.s1), s2d = adjoint(ops.s2);
    const SpMat a1d = adjoint(ops.a1), a2d = adjoint(ops.a2), bd = adjoint(ops.b);
    const SpMat e1 = s1d * ops.s1, e2 = s2d * ops.s2;
    const SpMat n1 = a1d * ops.a1, n2 = a2d * ops.a2, nb = bd * ops.b;

    SpMat h = d.atom * (e1 + e2) + d.cavity1 * n1 + d.cavity2 * n2 + d.fiber * nb;
    h += g1 * (SpMat(s1d * ops.a1) + SpMat(a1d * ops.s1));
    h += g2 * (SpMat(s2d * ops.a2) + SpMat(a2d * ops.s2));
    h += rates.v1 * (SpMat(a1d * ops.b) + SpMat(bd * ops.a1));
    h += rates.v2 * (SpMat(a2d * ops.b) + SpMat(bd * ops.a2));
    const SpMat& driven = drive.port == InputPort::A ? ops.a1 : ops.b;
    h += drive.amplitude * (driven + adjoint(driven));

    const std::vector<std::pair<double, SpMat>> channels = {
        {rates.kappa_1l + rates.kappa_1loss, ops.a1},
        {rates.kappa_2r + rates.kappa_2loss, ops.a2},
        {rates.kappa_b_bs + rates.kappa_b_loss, ops.b},
        {rates.gamma_par / 2.0, ops.s1},
        {rates.gamma_par / 2.0, ops.s2},
        {rates.gamma_las, n1},
        {rates.gamma_las, n2},
        {rates.gamma_las, nb},
        // Pure dephasing via the excited-state projector, which damps the
        // atomic coherence at exactly gamma_las.
        {rates.gamma_las, e1},
        {rates.gamma_las, e2},
    };
    const SpMat l = liouvillian(h, channels, dim);

    LindbladResult result;
    VecC v;
    if (spec.dimension() <= options.direct_dimension_limit) {
        v = solve_null_space_direct(l, dim);
        result.method = SteadyStateMethod::NullSpace;
    } else if (spec.dimension() <= options.null_space_dimension_limit &&
               solve_null_space_iterative(l, dim, options, v)) {
        result.method = SteadyStateMethod::NullSpaceIterative;
    } else {
        if (spec.dimension() <= options.null_space_dimension_limit) {
            result.warnings.push_back("iterative null-space solve failed; used propagation");
        }
        v = propagate(l, ops, options);
        result.method = SteadyStateMethod::Propagation;
    }
    result.rho = unvec(v, dim);
    const Eigen::MatrixXcd& rho = result.rho;

    result.trace_defect = std::abs(rho.trace() - 1.0);
    result.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    result.min_population = rho.diagonal().real().minCoeff();

    result.a1 = expectation(rho, ops.a1);
    result.a2 = expectation(rho, ops.a2);
    result.b = expectation(rho, ops.b);
    result.sigma1 = expectation(rho, ops.s1);
    result.sigma2 = expectation(rho, ops.s2);
    result.n1 = expectation(rho, n1).real();
    result.n2 = expectation(rho, n2).real();
    result.nb = expectation(rho, nb).real();

    const std::pair<double, int> photons[3] = {
        {result.n1, spec.n1_max}, {result.n2, spec.n2_max}, {result.nb, spec.nb_max}};
    const char* names[3] = {"cavity 1", "cavity 2", "fiber"};
    for (int k = 0; k < 3; ++k) {
        const auto [n, cutoff] = photons[k];
        if (cutoff > 0 && !(n < 0.1 * cutoff)) {
            result.truncation_ok = false;
            std::ostringstream msg;
            msg << names[k] << " photon number " << n << " is not below 0.1 x cutoff " << cutoff;
            result.warnings.push_back(msg.str());
        }
    }
    if (result.min_population < -1e-12) {
        result.warnings.push_back("negative population in steady state");
    }
    return result;
}

}  // namespace cavnet
