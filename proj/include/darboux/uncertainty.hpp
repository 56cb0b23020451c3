#pragma once

#include "darboux/model.hpp"
#include "darboux/quadrature.hpp"

namespace darboux {

struct ConjugatePair {
    double alpha;
    double beta;
};

namespace uncertainty {

ConjugatePair conjugate_order(double alpha);  // beta = alpha / (2 alpha - 1)

enum class PositionPath { analytic, quadrature };

struct XiResult {
    double xi = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double position_entropy = 0.0;
    double momentum_entropy = 0.0;
    PositionPath position_path = PositionPath::quadrature;
};

XiResult xi_renyi_detail(const ModelParams& p, int n, double alpha, const QuadratureOptions& opts = {});
XiResult xi_tsallis_detail(const ModelParams& p, int n, double alpha, const QuadratureOptions& opts = {});

double xi_renyi(const ModelParams& p, int n, double alpha, const QuadratureOptions& opts = {});
double xi_tsallis(const ModelParams& p, int n, double alpha, const QuadratureOptions& opts = {});

const char* path_name(PositionPath path);

}  // namespace uncertainty
}  // namespace darboux
