#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levyerg/certificates.hpp"
#include "levyerg/diagnostics.hpp"
#include "levyerg/levy_kernel.hpp"
#include "levyerg/rates.hpp"
#include "levyerg/simulator.hpp"

namespace levyerg {

struct DriftConfig {
    std::string family = "power";  // "power" | "tabulated"
    double A = 1.0;
    double kappa = 1.0;
    std::vector<double> xs, values;
};

struct ModelConfig {
    DriftConfig drift;
    std::vector<KernelComponent> components;
    std::optional<double> sigma, delta;  // declared; default = implied by the components
    std::optional<double> exp_alpha, exp_zeta;
};

struct RateFunctionConfig {
    std::string kind = "linear";  // "linear" | "power" | "log_power"
    double C = 1.0;
    double g = 1.0;
    double beta = 1.0;
    double q = 0.0;
};

struct CertificateConfig {
    int theorem = 1;
    double p = 1.2;
    double beta = 0.5;
    double zeta = 0.0;
    std::optional<double> kappa;             // default: fitted from the drift
    double C = 1.0;                          // constant of the suggested rate
    std::optional<RateFunctionConfig> f;     // explicit f overrides the suggestion
    double gamma = 1.0;
    double margin_fraction = 0.05;
    std::optional<std::vector<double>> outer, inner;
};

struct RateConfig {
    double t_min = 0.1;
    double t_max = 100.0;
    int points = 50;
    bool numeric = false;
};

struct SimulationConfig {
    long n = 100;
    double t = 1.0;
    long N = 1000;
    std::optional<double> eps;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    double x0 = 0.0;
    int threads = 1;
    std::vector<double> t_grid{0.5, 1.0, 1.5, 2.0, 3.0};
    std::optional<double> T_ref;  // default 4 max(t_grid)
    int bins = 0;
    int bootstrap = 200;
    double tolerance = 2.0;
    bool force = false;  // converge without a certificate
};

struct RunConfig {
    std::optional<ModelConfig> model;
    CertificateConfig certificate;
    RateConfig rate;
    std::optional<SimulationConfig> simulation;
    std::string output = ".";
};

/// Parses a JSON document. Missing optional blocks take defaults; unknown keys
/// and non-finite numbers raise a Config error.
RunConfig parse_config(const std::string& text);

/// Fully resolved JSON (every default written out). parse . serialize is the identity.
std::string serialize_config(const RunConfig& cfg, int indent = 2);

LevyTypeModel build_model(const ModelConfig& mc);
RateFunction build_rate_function(const RateFunctionConfig& rc);
CertificateGrid build_grid(const CertificateConfig& cc);
SimConfig build_sim_config(const SimulationConfig& sc);

}  // namespace levyerg
