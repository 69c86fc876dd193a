#pragma once

// JSON form of a calibrated model. The file carries the solved Theta arrays next to the
// local volatility pieces, so a reader rebuilds the solution without re-solving.

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lvg/calibration.hpp"
#include "lvg/error.hpp"
#include "lvg/pdde.hpp"

namespace lvg {

inline constexpr int kParamsSchema = 1;

struct FitSummary {
    double rmse_vol = 0.0;
    double rmse_price = 0.0;
    int iterations = 0;
    bool converged = false;
    double c3_residual = 0.0;
    bool cap_active = false;
};

struct ModelFile {
    Model model = Model::Quadratic;
    KnotStrategyKind strategy = KnotStrategyKind::MidXX;
    bool c3 = true;
    std::optional<double> discount;
    std::vector<double> knots;
    std::vector<double> params;
    std::vector<double> slots;
    LVGSolution solution;
    std::optional<FitSummary> fit;
};

inline nlohmann::ordered_json params_to_json(const CalibrationResult& r, std::optional<double> discount = std::nullopt) {
    nlohmann::ordered_json j;
    const auto& lv = r.localvar();
    j["schema"] = kParamsSchema;
    j["model"] = std::string(to_string(r.model));
    j["knot_strategy"] = std::string(to_string(r.strategy));
    j["c3"] = r.c3;
    j["forward"] = lv.forward;
    j["maturity"] = lv.maturity;
    j["lower"] = lv.lower();
    j["upper"] = lv.upper();
    j["discount"] = discount ? nlohmann::ordered_json(*discount) : nlohmann::ordered_json(nullptr);
    j["knots"] = r.knots;
    j["parameter"] = r.model == Model::Quadratic ? "lambda" : "sigma";
    j["params"] = r.params;
    j["slots"] = r.slots;
    nlohmann::ordered_json pieces = nlohmann::ordered_json::array();
    for (const auto& p : lv.pieces) pieces.push_back({p.alpha, p.beta, p.gamma});
    j["localvar"] = {{"knots", lv.knots}, {"forward_index", lv.forward_index}, {"pieces", pieces}};
    j["theta_c"] = r.solution.theta_c();
    j["theta_s"] = r.solution.theta_s();
    j["fit"] = {{"rmse_vol", r.rmse_vol},
                {"rmse_price", r.rmse_price},
                {"iterations", r.iterations},
                {"status", r.converged() ? "converged" : "max_iterations"},
                {"c3_residual", r.c3_residual},
                {"cap_active", r.cap_active}};
    return j;
}

inline std::string emit_params_json(const CalibrationResult& r, std::optional<double> discount = std::nullopt) {
    return params_to_json(r, discount).dump(2) + "\n";
}

inline ModelFile params_from_json(const nlohmann::json& j) {
    const auto bad = [](const std::string& m) { throw Error(ErrorCode::InvalidParams, m); };
    try {
        if (!j.is_object()) bad("params file must hold a JSON object");
        if (j.at("schema").get<int>() != kParamsSchema) bad("unsupported schema " + j.at("schema").dump());
        ModelFile f;
        const auto model = parse_model(j.at("model").get<std::string>());
        const auto strategy = parse_knot_strategy(j.at("knot_strategy").get<std::string>());
        if (!model) bad("unknown model");
        if (!strategy) bad("unknown knot strategy");
        f.model = *model;
        f.strategy = *strategy;
        f.c3 = j.at("c3").get<bool>();
        if (j.contains("discount") && !j["discount"].is_null()) f.discount = j["discount"].get<double>();
        f.knots = j.at("knots").get<std::vector<double>>();
        f.params = j.at("params").get<std::vector<double>>();
        f.slots = j.at("slots").get<std::vector<double>>();

        const auto& lvj = j.at("localvar");
        std::vector<QuadraticPiece> pieces;
        for (const auto& p : lvj.at("pieces")) {
            const auto c = p.get<std::vector<double>>();
            if (c.size() != 3) bad("each piece needs alpha, beta, gamma");
            pieces.push_back({c[0], c[1], c[2]});
        }
        auto lv = make_local_variance(lvj.at("knots").get<std::vector<double>>(), pieces, j.at("forward").get<double>(),
                                      j.at("maturity").get<double>());
        if (lv.forward_index != lvj.at("forward_index").get<std::size_t>()) bad("forward_index does not match the forward");
        f.solution = LVGSolution::from_parts(std::move(lv), j.at("theta_c").get<std::vector<double>>(),
                                             j.at("theta_s").get<std::vector<double>>());
        if (j.contains("fit")) {
            const auto& fj = j["fit"];
            FitSummary s;
            s.rmse_vol = fj.value("rmse_vol", 0.0);
            s.rmse_price = fj.value("rmse_price", 0.0);
            s.iterations = fj.value("iterations", 0);
            s.converged = fj.value("status", std::string()) == "converged";
            s.c3_residual = fj.value("c3_residual", 0.0);
            s.cap_active = fj.value("cap_active", false);
            f.fit = s;
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidParams, std::string("malformed params file: ") + e.what());
    }
}

inline ModelFile parse_params_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return params_from_json(j);
}

inline ModelFile load_params_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_params_json(ss.str());
}

} // namespace lvg
