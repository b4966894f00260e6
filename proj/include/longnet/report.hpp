#pragma once

#include <json.hpp>

#include "longnet/evaluation.hpp"
#include "longnet/saom.hpp"
#include "longnet/tergm.hpp"

namespace longnet::report {

using nlohmann::json;

/// Fit reports carry "model": "tergm" or "saom" plus everything needed to
/// rebuild the fitted model.
json to_json(const tergm::TergmFit& fit);
json to_json(const saom::SaomFit& fit);

/// Throws ConfigError on a missing or inconsistent field.
tergm::TergmModel tergm_model_from_json(const json& j);
saom::SaomModel saom_model_from_json(const json& j);

json to_json(const evaluation::CurveResult& curve);
json to_json(const evaluation::GofTable& table);
json to_json(const evaluation::TTest& test);

/// ROC/PR curves, AUCs and all five auxiliary GOF tables of an ensemble.
json evaluate_ensemble(const evaluation::PredictionEnsemble& ensemble);

/// Plain-text coefficient table.
std::string coefficient_table(const tergm::TergmFit& fit);
std::string coefficient_table(const saom::SaomFit& fit);

}  // namespace longnet::report
