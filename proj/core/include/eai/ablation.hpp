#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eai/config.hpp"
#include "eai/metrics.hpp"
#include "eai/model_config.hpp"

namespace eai {

struct AblationVariant {
    std::string name;  // e.g. "no-cn", "full"
    AblationFlags flags;
};

// The seven module combinations compared in the ablation table, in row
// order: no-cn, no-dc, no-cn-dc, no-pi, no-si, no-pi-si, full.
const std::vector<AblationVariant>& ablation_variants();

// Accepts a variant name ("full", "no-si", ...) or "none".
std::optional<AblationFlags> parse_ablation(const std::string& name);
std::string ablation_name(const AblationFlags& flags);

struct ParameterAudit {
    std::string variant;
    std::size_t parameters = 0;       // counted from the built model
    std::size_t removed = 0;          // full model minus this variant
    std::size_t expected_removed = 0; // from the configured dimensions
    bool ok() const { return removed == expected_removed; }
};

// Scalars each module owns, derived from the dimensions alone:
//   CN 3 mixing scalars; SI 6 * N2 * (3H^2 + 2(H^2 + H));
//   PI 2 * ((18H * 3H + 3H) + (3H + 1) + 1); DC none.
std::size_t module_parameter_count(const ModelConfig& config, const AblationFlags& disabled);

std::vector<ParameterAudit> audit_parameters(const ModelConfig& base, const SkeletonSpec& spec);

struct AblationRow {
    AblationVariant variant;
    ParameterAudit audit;
    ForecastReport report;
    double final_loss = 0.0;
};

// Trains and evaluates every variant from the same seed and data.
std::vector<AblationRow> run_ablation(const RunConfig& base, const std::vector<Window>& train_windows,
                                      const std::vector<Window>& eval_windows,
                                      const std::function<void(const std::string&)>& progress = {});

// Table with the four module columns, whole-body MPJPE per horizon, their
// average, the parameter count and the audit verdict.
std::string format_ablation_table(const std::vector<AblationRow>& rows);

}  // namespace eai
