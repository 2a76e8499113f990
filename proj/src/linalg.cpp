#include "qgad/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qgad/errors.hpp"
#include "qgad/random.hpp"

namespace qgad {

namespace {

struct TermMasks {
    std::uint64_t x_mask = 0;   // X and Y sites flip the basis state
    std::uint64_t zy_mask = 0;  // Z and Y sites contribute (-1)^bit
    int y_count = 0;
    double coefficient = 0.0;
};

TermMasks masks_of(const PauliTerm& t) {
    TermMasks m;
    m.coefficient = t.coefficient;
    for (const auto& [q, ax] : t.string.sites()) {
        const std::uint64_t bit = 1ULL << q;
        switch (ax) {
            case Axis::X: m.x_mask |= bit; break;
            case Axis::Y:
                m.x_mask |= bit;
                m.zy_mask |= bit;
                ++m.y_count;
                break;
            case Axis::Z: m.zy_mask |= bit; break;
        }
    }
    return m;
}

Complex phase_amplitude(const TermMasks& m, std::uint64_t j) {
    static const Complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int sign = __builtin_parityll(j & m.zy_mask) ? -1 : 1;
    return m.coefficient * static_cast<double>(sign) * i_pow[m.y_count % 4];
}

std::vector<TermMasks> all_masks(const PauliSum& h) {
    std::vector<TermMasks> ms;
    ms.reserve(h.size());
    for (const auto& t : h.terms()) ms.push_back(masks_of(t));
    return ms;
}

}  // namespace

const DenseMatrix& Operator::dense() const {
    if (!is_dense_) throw DimensionError("operator is stored sparse");
    return dense_;
}

const SparseMatrix& Operator::sparse() const {
    if (is_dense_) throw DimensionError("operator is stored dense");
    return sparse_;
}

StateVector Operator::apply(const StateVector& x) const {
    if (x.size() != dim()) throw ValidationError("operator/state dimension mismatch");
    return is_dense_ ? StateVector(dense_ * x) : StateVector(sparse_ * x);
}

Operator to_operator(const PauliSum& h, Storage storage) {
    const int n = static_cast<int>(h.n_qubits());
    bool dense = true;
    switch (storage) {
        case Storage::Auto: dense = n <= Operator::dense_qubit_cap; break;
        case Storage::Dense: dense = true; break;
        case Storage::Sparse: dense = false; break;
    }
    if (dense && n > Operator::dense_qubit_cap)
        throw DimensionError("dense cap exceeded: " + std::to_string(n) + " qubits");
    if (!dense && n > Operator::sparse_qubit_cap)
        throw DimensionError("sparse cap exceeded: " + std::to_string(n) + " qubits");

    Operator op;
    op.n_qubits_ = n;
    op.is_dense_ = dense;
    const auto dim = Eigen::Index(1) << n;
    const auto ms = all_masks(h);
    if (dense) {
        op.dense_ = DenseMatrix::Zero(dim, dim);
        for (const auto& m : ms) {
            for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(dim); ++j) {
                op.dense_(static_cast<Eigen::Index>(j ^ m.x_mask), static_cast<Eigen::Index>(j)) +=
                    phase_amplitude(m, j);
            }
        }
    } else {
        std::vector<Eigen::Triplet<Complex>> trips;
        trips.reserve(ms.size() * static_cast<std::size_t>(dim));
        for (const auto& m : ms) {
            for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(dim); ++j) {
                trips.emplace_back(static_cast<Eigen::Index>(j ^ m.x_mask),
                                   static_cast<Eigen::Index>(j), phase_amplitude(m, j));
            }
        }
        op.sparse_.resize(dim, dim);
        op.sparse_.setFromTriplets(trips.begin(), trips.end());
        op.sparse_.makeCompressed();
    }
    return op;
}

namespace {

bool structurally_diagonal(const DenseMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != Complex(0, 0)) return false;
    return true;
}

Spectrum finalize(Eigen::VectorXd values, DenseMatrix vectors, std::optional<double> next_value,
                  const Tolerances& tol, double scale) {
    Spectrum s;
    s.values = std::move(values);
    s.vectors = std::move(vectors);
    if (next_value) {
        s.gap_above = *next_value - s.values(s.values.size() - 1);
        s.boundary_reliable = *s.gap_above > tol.degenerate_boundary * std::max(1.0, scale);
    }
    return s;
}

/// Restarted block Krylov with full reorthogonalization; block size 2d.
Spectrum sparse_lowest(const Operator& op, int d, const Tolerances& tol) {
    const Eigen::Index dim = op.dim();
    const int want = std::min<int>(d + 1, static_cast<int>(dim));  // +1 for the gap
    const Eigen::Index block = std::min<Eigen::Index>(2 * d, dim);
    const Eigen::Index basis_cap = std::min<Eigen::Index>(dim, std::max(8 * want, 64));

    SplitMix64 rng(0x9e3779b97f4a7c15ULL);  // deterministic start block
    DenseMatrix x(dim, block);
    for (Eigen::Index j = 0; j < block; ++j)
        for (Eigen::Index i = 0; i < dim; ++i)
            x(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));

    const int max_restarts = 60;
    for (int restart = 0; restart < max_restarts; ++restart) {
        // Orthonormal Krylov basis grown block by block.
        DenseMatrix basis(dim, basis_cap);
        Eigen::Index cols = 0;
        DenseMatrix fresh = x;
        while (cols < basis_cap && fresh.cols() > 0) {
            // two-pass Gram-Schmidt against everything accepted so far
            for (int pass = 0; pass < 2; ++pass) {
                if (cols > 0)
                    fresh -= basis.leftCols(cols) * (basis.leftCols(cols).adjoint() * fresh);
            }
            DenseMatrix accepted(dim, fresh.cols());
            Eigen::Index kept = 0;
            for (Eigen::Index j = 0; j < fresh.cols(); ++j) {
                Eigen::VectorXcd v = fresh.col(j);
                if (kept > 0) v -= accepted.leftCols(kept) * (accepted.leftCols(kept).adjoint() * v);
                const double nrm = v.norm();
                if (nrm > 1e-10) accepted.col(kept++) = v / nrm;
            }
            if (kept == 0) break;
            const Eigen::Index take = std::min(kept, basis_cap - cols);
            basis.middleCols(cols, take) = accepted.leftCols(take);
            cols += take;
            if (cols >= basis_cap) break;
            fresh = op.sparse() * basis.middleCols(cols - take, take);
        }
        basis.conservativeResize(Eigen::NoChange, cols);

        DenseMatrix hb(dim, cols);
        for (Eigen::Index j = 0; j < cols; ++j) hb.col(j) = op.sparse() * basis.col(j);
        DenseMatrix projected = basis.adjoint() * hb;
        projected = ((projected + projected.adjoint()) / 2.0).eval();
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(projected);
        const Eigen::Index ritz = std::min(std::max(block, Eigen::Index(want)), cols);
        DenseMatrix candidates = basis * es.eigenvectors().leftCols(ritz);
        Eigen::VectorXd theta = es.eigenvalues().head(ritz);

        const double scale =
            std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(cols - 1)));
        bool converged = want <= ritz;
        for (int j = 0; j < want && converged; ++j) {
            const double res = (op.sparse() * candidates.col(j) - theta(j) * candidates.col(j)).norm();
            if (res > tol.eigen_residual * std::max(1.0, scale)) converged = false;
        }
        if (converged) {
            std::optional<double> next;
            if (d < dim) next = theta(d);
            return finalize(theta.head(d), candidates.leftCols(d), next, tol, scale);
        }
        x = candidates.leftCols(block);
    }
    throw NumericError("iterative eigensolver did not converge within the restart cap");
}

}  // namespace

Spectrum lowest_eigenpairs(const Operator& op, int d, const Tolerances& tol) {
    if (d < 1 || d > op.dim()) throw ValidationError("requested eigenpair count out of range");
    if (!op.is_dense()) return sparse_lowest(op, d, tol);

    const DenseMatrix& m = op.dense();
    const Eigen::Index dim = op.dim();
    if (structurally_diagonal(m)) {
        // Exact path: computational-basis eigenvectors, no solver noise.
        std::vector<Eigen::Index> order(dim);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return m(a, a).real() < m(b, b).real();
        });
        Eigen::VectorXd values(d);
        DenseMatrix vectors = DenseMatrix::Zero(dim, d);
        for (int j = 0; j < d; ++j) {
            values(j) = m(order[j], order[j]).real();
            vectors(order[j], j) = 1.0;
        }
        std::optional<double> next;
        if (d < dim) next = m(order[d], order[d]).real();
        double scale = std::max(std::abs(m(order[0], order[0]).real()),
                                std::abs(m(order[dim - 1], order[dim - 1]).real()));
        return finalize(std::move(values), std::move(vectors), next, tol, scale);
    }

    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m);
    if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
    std::optional<double> next;
    if (d < dim) next = es.eigenvalues()(d);
    const double scale =
        std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(dim - 1)));
    return finalize(es.eigenvalues().head(d), es.eigenvectors().leftCols(d), next, tol, scale);
}

DensityOperator::DensityOperator(DenseMatrix rho, int n_qubits, const Tolerances& tol)
    : rho_(std::move(rho)), n_qubits_(n_qubits) {
    if (rho_.rows() != rho_.cols() || rho_.rows() != (Eigen::Index(1) << n_qubits_))
        throw ValidationError("density matrix dimension mismatch");
    const double trace = rho_.trace().real();
    if (std::abs(trace - 1.0) > tol.density_trace)
        throw NumericError("density operator trace deviates from 1 by " +
                           std::to_string(std::abs(trace - 1.0)));
}

namespace {

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> scatter_tables(
    const std::vector<int>& keep, int n_qubits) {
    if (keep.empty()) throw ValidationError("partial_trace: keep set is empty");
    std::vector<bool> kept(n_qubits, false);
    for (int q : keep) {
        if (q < 0 || q >= n_qubits) throw ValidationError("partial_trace: qubit out of range");
        if (kept[q]) throw ValidationError("partial_trace: repeated qubit in keep set");
        kept[q] = true;
    }
    std::vector<int> env;
    for (int q = 0; q < n_qubits; ++q)
        if (!kept[q]) env.push_back(q);

    auto table = [](const std::vector<int>& positions) {
        std::vector<std::uint64_t> t(std::size_t(1) << positions.size());
        for (std::uint64_t a = 0; a < t.size(); ++a) {
            std::uint64_t full = 0;
            for (std::size_t i = 0; i < positions.size(); ++i)
                if (a >> i & 1) full |= 1ULL << positions[i];
            t[a] = full;
        }
        return t;
    };
    return {table(keep), table(env)};
}

}  // namespace

DensityOperator partial_trace(const StateVector& state, const std::vector<int>& keep,
                              int n_qubits, const Tolerances& tol) {
    if (state.size() != (Eigen::Index(1) << n_qubits))
        throw ValidationError("partial_trace: state dimension mismatch");
    auto [ka, ea] = scatter_tables(keep, n_qubits);
    const auto dk = static_cast<Eigen::Index>(ka.size());
    DenseMatrix rho = DenseMatrix::Zero(dk, dk);
    for (std::size_t e = 0; e < ea.size(); ++e) {
        for (Eigen::Index a = 0; a < dk; ++a) {
            const Complex va = state(static_cast<Eigen::Index>(ka[a] | ea[e]));
            if (va == Complex(0, 0)) continue;
            for (Eigen::Index b = 0; b < dk; ++b)
                rho(a, b) += va * std::conj(state(static_cast<Eigen::Index>(ka[b] | ea[e])));
        }
    }
    return DensityOperator(std::move(rho), static_cast<int>(keep.size()), tol);
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep,
                              const Tolerances& tol) {
    auto [ka, ea] = scatter_tables(keep, rho.n_qubits());
    const auto dk = static_cast<Eigen::Index>(ka.size());
    DenseMatrix out = DenseMatrix::Zero(dk, dk);
    for (std::size_t e = 0; e < ea.size(); ++e)
        for (Eigen::Index a = 0; a < dk; ++a)
            for (Eigen::Index b = 0; b < dk; ++b)
                out(a, b) += rho.matrix()(static_cast<Eigen::Index>(ka[a] | ea[e]),
                                          static_cast<Eigen::Index>(ka[b] | ea[e]));
    return DensityOperator(std::move(out), static_cast<int>(keep.size()), tol);
}

double expectation(const Operator& op, const StateVector& psi, const Tolerances& tol) {
    const Complex value = psi.dot(op.apply(psi));  // Eigen dot conjugates the left argument
    if (op.hermitian() && std::abs(value.imag()) > tol.hermitian_imag * std::max(1.0, std::abs(value.real())))
        throw NumericError("Hermitian expectation has imaginary part " +
                           std::to_string(value.imag()));
    return value.real();
}

double expectation(const PauliSum& h, const StateVector& psi, const Tolerances& tol) {
    const auto dim = static_cast<std::uint64_t>(psi.size());
    if ((dim & (dim - 1)) != 0) throw ValidationError("state dimension is not a power of two");
    if ((std::uint64_t(1) << h.n_qubits()) > dim)
        throw ValidationError("Pauli sum wider than the state register");
    Complex total = 0;
    double coeff_scale = 0;
    for (const auto& t : h.terms()) {
        const TermMasks m = masks_of(t);
        coeff_scale += std::abs(t.coefficient);
        Complex acc = 0;
        for (std::uint64_t j = 0; j < dim; ++j) {
            acc += std::conj(psi(static_cast<Eigen::Index>(j ^ m.x_mask))) *
                   (phase_amplitude(m, j) * psi(static_cast<Eigen::Index>(j)));
        }
        total += acc;
    }
    if (std::abs(total.imag()) > tol.hermitian_imag * std::max(1.0, coeff_scale))
        throw NumericError("Hermitian expectation has imaginary part " +
                           std::to_string(total.imag()));
    return total.real();
}

StateVector apply_pauli_string(const PauliString& p, const StateVector& psi) {
    const auto dim = static_cast<std::uint64_t>(psi.size());
    TermMasks m = masks_of({1.0, p});
    StateVector out(psi.size());
    for (std::uint64_t j = 0; j < dim; ++j)
        out(static_cast<Eigen::Index>(j ^ m.x_mask)) = phase_amplitude(m, j) * psi(static_cast<Eigen::Index>(j));
    return out;
}

double operator_norm(const PauliSum& h, NormMode mode) {
    if (mode == NormMode::Bound) {
        double sum = 0;
        for (const auto& t : h.terms()) sum += std::abs(t.coefficient);
        return sum;
    }
    if (static_cast<int>(h.n_qubits()) > Operator::dense_qubit_cap)
        throw DimensionError("exact operator norm needs the dense cap");
    const Operator op = to_operator(h, Storage::Dense);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(op.dense(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("eigensolver failed in operator_norm");
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace qgad
