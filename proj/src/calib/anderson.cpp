#include "swing/calib/anderson.hpp"

#include "swing/error.hpp"

namespace swing::calib {

Eigen::VectorXd anderson_step(const std::deque<Eigen::VectorXd>& xs, const std::deque<Eigen::VectorXd>& gs, int m,
                              double ridge) {
    require(!xs.empty() && xs.size() == gs.size(), "anderson_step: needs matching nonempty history");
    const std::size_t n = xs.size();
    const Eigen::VectorXd& g_last = gs.back();
    const int depth = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(m, 0)), n - 1));
    if (depth == 0) return g_last;

    const Eigen::Index dim = g_last.size();
    const Eigen::VectorXd f_last = gs.back() - xs.back();
    if (f_last.norm() == 0.0) return g_last;
    Eigen::MatrixXd dF(dim, depth), dG(dim, depth);
    for (int c = 0; c < depth; ++c) {
        const std::size_t i = n - 1 - static_cast<std::size_t>(depth) + static_cast<std::size_t>(c);
        dF.col(c) = (gs[i + 1] - xs[i + 1]) - (gs[i] - xs[i]);
        dG.col(c) = gs[i + 1] - gs[i];
    }
    const double scale = dF.squaredNorm() / depth;
    if (!(scale > 0.0)) return g_last;
    Eigen::MatrixXd normal = dF.transpose() * dF;
    normal.diagonal().array() += ridge * scale;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    const Eigen::VectorXd diag = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || diag.minCoeff() <= 10.0 * ridge * scale) return g_last;
    const Eigen::VectorXd gamma = ldlt.solve(dF.transpose() * f_last);
    if (!gamma.allFinite()) return g_last;
    return g_last - dG * gamma;
}

Eigen::VectorXd AndersonMixer::step(const Eigen::VectorXd& x, const Eigen::VectorXd& gx) {
    xs_.push_back(x);
    gs_.push_back(gx);
    while (static_cast<int>(xs_.size()) > m_ + 1) {
        xs_.pop_front();
        gs_.pop_front();
    }
    return anderson_step(xs_, gs_, m_, ridge_);
}

} // namespace swing::calib
