#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ncriesz/symbol.hpp"
#include "ncriesz/torus.hpp"

namespace ncr {

// Diagonal Fourier multiplier on TorusPoly. All kinds are coefficientwise
// scalar multiplications; the zero frequency uses the Riesz-kills-constants
// convention for the riesz kinds and m(0) = 1 for a_t.
class MultiplierOp {
  public:
    static MultiplierOp riesz(int j);
    static MultiplierOp truncated_riesz(int j, double eps, std::shared_ptr<const SymbolTable> table);
    static MultiplierOp a_t(double t, std::shared_ptr<const SymbolTable> table);
    static MultiplierOp heat(int j, double t);
    static MultiplierOp rotation(std::vector<double> z);
    static MultiplierOp laplacian();  // -4 pi^2 |n|^2, used by the identity checks

    cplx symbol(const Monomial& n) const;
    std::string kind() const { return kind_; }

  private:
    MultiplierOp() = default;
    std::string kind_;
    int j_ = 0;
    double scalar_ = 0.0;  // eps or t
    std::vector<double> z_;
    std::shared_ptr<const SymbolTable> table_;
};

TorusPoly apply(const MultiplierOp& op, const TorusPoly& x);

TorusPoly riesz_transform(int j, const TorusPoly& x);
TorusPoly truncated_riesz(int j, double eps, const TorusPoly& x);

// max coefficient residual of (R_j)^2(Delta x) vs -d_j^2 x; both symbol chains
// are simplified in integer arithmetic so the identity is exact
double riesz_laplacian_identity_check(const TorusPoly& x, int j);

// coefficientwise distance between W_z(R_j^eps x) and R_j^eps(W_z x)
double rotate_then_transform_check(const TorusPoly& x, const std::vector<double>& z, int j, double eps);

}  // namespace ncr
