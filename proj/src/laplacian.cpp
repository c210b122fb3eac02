#include "relaxinv/laplacian.hpp"

#include <algorithm>
#include <cmath>

#include "relaxinv/errors.hpp"

namespace relaxinv {

namespace {

void check_shape(const LaplacianOp& op, const Eigen::VectorXd& f) {
    if (op.n1 < 1 || op.n2 < 1) throw ShapeError("laplacian: invalid grid shape");
    if (f.size() != op.size())
        throw ShapeError("laplacian: f has length " + std::to_string(f.size()) + ", expected " +
                         std::to_string(op.size()));
}

}  // namespace

Eigen::VectorXd apply_laplacian(const LaplacianOp& op, const Eigen::VectorXd& f) {
    check_shape(op, f);
    const Eigen::Index n1 = op.n1, n2 = op.n2;
    Eigen::Map<const Eigen::MatrixXd> F(f.data(), n1, n2);
    Eigen::VectorXd out(n1 * n2);
    Eigen::Map<Eigen::MatrixXd> G(out.data(), n1, n2);
    for (Eigen::Index j = 0; j < n2; ++j) {
        const Eigen::Index jl = std::max<Eigen::Index>(j - 1, 0);
        const Eigen::Index jr = std::min<Eigen::Index>(j + 1, n2 - 1);
        for (Eigen::Index i = 0; i < n1; ++i) {
            const Eigen::Index iu = std::max<Eigen::Index>(i - 1, 0);
            const Eigen::Index id = std::min<Eigen::Index>(i + 1, n1 - 1);
            // clamped neighbors contribute F(i,j) itself, keeping constants in
            // the null space
            G(i, j) = 4.0 * F(i, j) - F(iu, j) - F(id, j) - F(i, jl) - F(i, jr);
        }
    }
    return out;
}

Eigen::VectorXd gradient_magnitude(const Eigen::VectorXd& f, Eigen::Index n1, Eigen::Index n2) {
    if (n1 < 1 || n2 < 1 || f.size() != n1 * n2)
        throw ShapeError("gradient_magnitude: shape mismatch");
    Eigen::Map<const Eigen::MatrixXd> F(f.data(), n1, n2);
    Eigen::VectorXd out(n1 * n2);
    Eigen::Map<Eigen::MatrixXd> P(out.data(), n1, n2);
    for (Eigen::Index j = 0; j < n2; ++j) {
        for (Eigen::Index i = 0; i < n1; ++i) {
            double dx = 0.0, dy = 0.0;
            if (n1 > 1) dx = (i + 1 < n1) ? F(i + 1, j) - F(i, j) : F(i, j) - F(i - 1, j);
            if (n2 > 1) dy = (j + 1 < n2) ? F(i, j + 1) - F(i, j) : F(i, j) - F(i, j - 1);
            P(i, j) = std::hypot(dx, dy);
        }
    }
    return out;
}

Eigen::VectorXd neighborhood_max_sq(const Eigen::VectorXd& v, Eigen::Index n1, Eigen::Index n2,
                                    int radius) {
    if (n1 < 1 || n2 < 1 || v.size() != n1 * n2)
        throw ShapeError("neighborhood_max_sq: shape mismatch");
    if (radius < 0) throw DomainError("neighborhood_max_sq: radius must be >= 0");
    Eigen::Map<const Eigen::MatrixXd> V(v.data(), n1, n2);
    Eigen::VectorXd out(n1 * n2);
    Eigen::Map<Eigen::MatrixXd> W(out.data(), n1, n2);
    const Eigen::Index r = radius;
    for (Eigen::Index j = 0; j < n2; ++j) {
        const Eigen::Index j0 = std::max<Eigen::Index>(j - r, 0);
        const Eigen::Index j1 = std::min<Eigen::Index>(j + r, n2 - 1);
        for (Eigen::Index i = 0; i < n1; ++i) {
            const Eigen::Index i0 = std::max<Eigen::Index>(i - r, 0);
            const Eigen::Index i1 = std::min<Eigen::Index>(i + r, n1 - 1);
            double m = 0.0;
            for (Eigen::Index jj = j0; jj <= j1; ++jj)
                for (Eigen::Index ii = i0; ii <= i1; ++ii)
                    m = std::max(m, V(ii, jj) * V(ii, jj));
            W(i, j) = m;
        }
    }
    return out;
}

LocalMaps local_maps(const LaplacianOp& op, const Eigen::VectorXd& f) {
    return LocalMaps{apply_laplacian(op, f), gradient_magnitude(f, op.n1, op.n2)};
}

}  // namespace relaxinv
