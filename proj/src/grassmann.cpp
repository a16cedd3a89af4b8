#include "mubs/grassmann.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mubs {

namespace {

void require_bases(std::span<const Basis> bases) {
    if (bases.size() < 2) throw DomainError("need at least two bases");
    for (const auto& b : bases) {
        if (b.dim() != bases[0].dim()) throw DimensionError("bases have different dimensions");
    }
}

}  // namespace

RealVector hermitian_coordinates(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("hermitian_coordinates needs a square matrix");
    const int n = static_cast<int>(a.rows());
    RealVector c(n * n - 1);
    int idx = 0;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) c(idx++) = a(j, k).real();
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) c(idx++) = -a(j, k).imag();
    for (int l = 1; l < n; ++l) {
        double s = 0.0;
        for (int j = 0; j < l; ++j) s += a(j, j).real();
        s -= l * a(l, l).real();
        c(idx++) = 0.5 * std::sqrt(2.0 / (l * (l + 1.0))) * s;
    }
    return c;
}

ComplexMatrix gell_mann(int n, int index) {
    if (n < 2 || index < 0 || index >= n * n - 1) throw DomainError("gell_mann: index out of range");
    ComplexMatrix g = ComplexMatrix::Zero(n, n);
    const int pairs = n * (n - 1) / 2;
    if (index < 2 * pairs) {
        int t = index % pairs;
        for (int j = 0; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                if (t-- != 0) continue;
                if (index < pairs) {
                    g(j, k) = 1.0;
                    g(k, j) = 1.0;
                } else {
                    g(j, k) = Complex(0.0, -1.0);
                    g(k, j) = Complex(0.0, 1.0);
                }
            }
        }
        return g;
    }
    const int l = index - 2 * pairs + 1;
    const double s = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) g(j, j) = s;
    g(l, l) = -l * s;
    return g;
}

RealVector bloch_embed(const ComplexVector& v, double tol) {
    const int n = static_cast<int>(v.size());
    if (n < 2) throw DomainError("bloch_embed needs N >= 2");
    if (std::abs(v.norm() - 1.0) > tol) throw DomainError("bloch_embed: input vector is not normalized");
    // The identity part of |v><v| - 1/N has no traceless coordinates.
    const ComplexMatrix rho = v * v.adjoint();
    return std::sqrt(2.0 * n / (n - 1.0)) * hermitian_coordinates(rho);
}

double hs_distance_sq(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_distance_sq: shape mismatch");
    return 0.5 * (a - b).cwiseAbs2().sum();
}

double BasisProjector::idempotency_defect() const {
    return (matrix * matrix - matrix).cwiseAbs().maxCoeff();
}

RealMatrix basis_frame(const Basis& b, const Tolerance& tol) {
    require_unitary(b, tol.eq_tol);
    const int n = b.dim();
    RealMatrix frame(n * n - 1, n);
    for (int a = 0; a < n; ++a) frame.col(a) = bloch_embed(b.matrix.col(a), 1e-8);
    return std::sqrt((n - 1.0) / n) * frame;
}

BasisProjector basis_projector(const Basis& b, const Tolerance& tol) {
    require_unitary(b, tol.eq_tol);
    const int n = b.dim();
    if (n < 2) throw DomainError("basis_projector needs N >= 2");
    RealMatrix p = RealMatrix::Zero(n * n - 1, n * n - 1);
    for (int a = 0; a < n; ++a) {
        const RealVector e = bloch_embed(b.matrix.col(a), 1e-8);
        p.selfadjointView<Eigen::Lower>().rankUpdate(e, (n - 1.0) / n);
    }
    p.triangularView<Eigen::StrictlyUpper>() = p.transpose();
    return {p, n};
}

double chordal_distance_sq(const BasisProjector& p1, const BasisProjector& p2) {
    if (p1.dim != p2.dim || p1.matrix.rows() != p2.matrix.rows()) {
        throw DimensionError("chordal_distance_sq: projectors have different dimensions");
    }
    const double tr = (p1.matrix.array() * p2.matrix.array()).sum();
    return (p1.dim - 1.0) - tr;
}

double chordal_distance_sq_overlap(const Basis& a, const Basis& b, const Tolerance& tol) {
    const RealMatrix o = overlap_squares(a, b, tol);
    const double inv = 1.0 / a.dim();
    return (a.dim() - 1.0) - (o.array() - inv).square().sum();
}

RealMatrix distance_table(std::span<const Basis> bases, const Tolerance& tol) {
    require_bases(bases);
    std::vector<BasisProjector> proj;
    proj.reserve(bases.size());
    for (const auto& b : bases) proj.push_back(basis_projector(b, tol));
    const auto m = static_cast<Eigen::Index>(bases.size());
    RealMatrix t = RealMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            t(i, j) = t(j, i) = chordal_distance_sq(proj[static_cast<std::size_t>(i)], proj[static_cast<std::size_t>(j)]);
        }
    }
    return t;
}

std::string distance_table_csv(const RealMatrix& table, const std::vector<std::string>& labels) {
    if (static_cast<Eigen::Index>(labels.size()) != table.rows()) throw DimensionError("label count mismatch");
    std::ostringstream out;
    out << "label";
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
    char buf[40];
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        out << labels[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < table.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", table(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    return out.str();
}

double spread_objective(std::span<const Basis> bases, const Tolerance& tol) {
    require_bases(bases);
    double f = 0.0;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        for (std::size_t j = i + 1; j < bases.size(); ++j) f += chordal_distance_sq_overlap(bases[i], bases[j], tol);
    }
    return f;
}

double spread_upper_bound(int n, int m) { return 0.5 * m * (m - 1.0) * (n - 1.0); }

}  // namespace mubs
