#ifndef RELAXINV_LAPLACIAN_HPP
#define RELAXINV_LAPLACIAN_HPP

#include <Eigen/Core>

namespace relaxinv {

// Five-point discrete Laplacian on an n1 x n2 grid with reflective
// (Neumann) boundaries: out-of-range neighbors are clamped to the edge.
// The resulting operator is symmetric, annihilates constants and has
// spectral norm below 8.
struct LaplacianOp {
    Eigen::Index n1 = 0;
    Eigen::Index n2 = 0;

    Eigen::Index size() const { return n1 * n2; }
};

// Local maps driving the penalty adaptation: curvature c = L f and
// gradient magnitude p = vec(||grad F||).
struct LocalMaps {
    Eigen::VectorXd c;
    Eigen::VectorXd p;
};

// (L f)(i,j) = 4 F(i,j) - F(i-1,j) - F(i+1,j) - F(i,j-1) - F(i,j+1),
// indices clamped at the boundary.
Eigen::VectorXd apply_laplacian(const LaplacianOp& op, const Eigen::VectorXd& f);

// Per-pixel Euclidean norm of forward differences; one-sided (backward)
// at the trailing edge of each axis.
Eigen::VectorXd gradient_magnitude(const Eigen::VectorXd& f, Eigen::Index n1, Eigen::Index n2);

// At pixel i, max of v_mu^2 over the (2r+1) x (2r+1) window clipped to the grid.
Eigen::VectorXd neighborhood_max_sq(const Eigen::VectorXd& v, Eigen::Index n1, Eigen::Index n2,
                                    int radius);

LocalMaps local_maps(const LaplacianOp& op, const Eigen::VectorXd& f);

}  // namespace relaxinv

#endif
