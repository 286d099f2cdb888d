#pragma once

#include <Eigen/Dense>

#include <deque>

namespace swing::calib {

/// Type-II Anderson mixing. Given iterates x_i and images g(x_i), the next
/// point is g(x_n) - dG gamma where gamma minimizes |f_n - dF gamma|_2 over
/// the last min(m, n) residual differences (f = g(x) - x). A rank-deficient
/// least-squares system falls back to the plain step g(x_n).
Eigen::VectorXd anderson_step(const std::deque<Eigen::VectorXd>& xs, const std::deque<Eigen::VectorXd>& gs, int m,
                              double ridge = 1e-10);

class AndersonMixer {
public:
    explicit AndersonMixer(int memory = 5, double ridge = 1e-10) : m_(memory), ridge_(ridge) {}

    Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& gx);
    void reset() {
        xs_.clear();
        gs_.clear();
    }

private:
    int m_;
    double ridge_;
    std::deque<Eigen::VectorXd> xs_, gs_;
};

} // namespace swing::calib
