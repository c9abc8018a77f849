#include "eai/ablation.hpp"

#include <cstdio>
#include <sstream>

#include "eai/error.hpp"
#include "eai/model.hpp"
#include "eai/motion_io.hpp"
#include "eai/trainer.hpp"

namespace eai {

const std::vector<AblationVariant>& ablation_variants() {
    static const std::vector<AblationVariant> variants = {
        {"no-cn", {false, true, true, true}},
        {"no-dc", {true, false, true, true}},
        {"no-cn-dc", {false, false, true, true}},
        {"no-pi", {true, true, true, false}},
        {"no-si", {true, true, false, true}},
        {"no-pi-si", {true, true, false, false}},
        {"full", {true, true, true, true}},
    };
    return variants;
}

std::optional<AblationFlags> parse_ablation(const std::string& name) {
    if (name == "none") return AblationFlags{};
    for (const auto& v : ablation_variants())
        if (v.name == name) return v.flags;
    return std::nullopt;
}

std::string ablation_name(const AblationFlags& flags) {
    for (const auto& v : ablation_variants())
        if (v.flags == flags) return v.name;
    std::string name;
    if (!flags.cn) name += "-cn";
    if (!flags.dc) name += "-dc";
    if (!flags.si) name += "-si";
    if (!flags.pi) name += "-pi";
    return "no" + name;
}

std::size_t module_parameter_count(const ModelConfig& config, const AblationFlags& disabled) {
    const std::size_t h = config.feature_width;
    std::size_t n = 0;
    if (!disabled.cn) n += 3;
    if (!disabled.si) n += 6 * config.attention_blocks * (3 * h * h + 2 * (h * h + h));
    if (!disabled.pi) n += 2 * ((18 * h * 3 * h + 3 * h) + (3 * h + 1) + 1);
    return n;
}

std::vector<ParameterAudit> audit_parameters(const ModelConfig& base, const SkeletonSpec& spec) {
    ModelConfig full = base;
    full.ablation = {};
    const std::size_t full_count = EaiModel(full, spec).parameter_count();
    std::vector<ParameterAudit> audits;
    for (const auto& v : ablation_variants()) {
        ModelConfig c = base;
        c.ablation = v.flags;
        ParameterAudit a;
        a.variant = v.name;
        a.parameters = EaiModel(c, spec).parameter_count();
        a.removed = full_count - a.parameters;
        a.expected_removed = module_parameter_count(base, v.flags);
        audits.push_back(a);
    }
    return audits;
}

std::vector<AblationRow> run_ablation(const RunConfig& base, const std::vector<Window>& train_windows,
                                      const std::vector<Window>& eval_windows,
                                      const std::function<void(const std::string&)>& progress) {
    const auto audits = audit_parameters(base.model, base.skeleton);
    std::vector<AblationRow> rows;
    for (std::size_t i = 0; i < ablation_variants().size(); ++i) {
        const auto& variant = ablation_variants()[i];
        if (progress) progress(variant.name);
        RunConfig cfg = base;
        cfg.model.ablation = variant.flags;
        EaiModel model(cfg.model, cfg.skeleton);
        Trainer trainer(model, train_windows, cfg.train);
        const TrainResult result = trainer.run();
        AblationRow row;
        row.variant = variant;
        row.audit = audits[i];
        row.final_loss = result.step_loss.empty() ? 0.0 : result.step_loss.back();
        row.report = evaluate(ModelForecaster(model), eval_windows, cfg.horizons, cfg.skeleton);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_ablation_table(const std::vector<AblationRow>& rows) {
    std::ostringstream os;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-10s %3s %3s %3s %3s", "variant", "CN", "DC", "PI", "SI");
    os << buf;
    if (!rows.empty()) {
        for (const auto& h : rows.front().report.horizons) {
            std::snprintf(buf, sizeof buf, " %12s", (format_double(h.seconds) + "s").c_str());
            os << buf;
        }
    }
    std::snprintf(buf, sizeof buf, " %12s %10s %6s\n", "avg", "params", "audit");
    os << buf;
    auto mark = [](bool on) { return on ? "x" : "-"; };
    for (const auto& r : rows) {
        const auto& f = r.variant.flags;
        std::snprintf(buf, sizeof buf, "%-10s %3s %3s %3s %3s", r.variant.name.c_str(), mark(f.cn), mark(f.dc),
                      mark(f.pi), mark(f.si));
        os << buf;
        double sum = 0.0;
        for (double v : r.report.whole_body) {
            std::snprintf(buf, sizeof buf, " %12.6f", v);
            os << buf;
            sum += v;
        }
        const double avg = r.report.whole_body.empty() ? 0.0 : sum / static_cast<double>(r.report.whole_body.size());
        std::snprintf(buf, sizeof buf, " %12.6f %10zu %6s\n", avg, r.audit.parameters, r.audit.ok() ? "ok" : "FAIL");
        os << buf;
    }
    return os.str();
}

}  // namespace eai
