#pragma once

#include <json.hpp>

#include "gausskey/baseline.hpp"
#include "gausskey/entropy.hpp"
#include "gausskey/protocol.hpp"

namespace gausskey {

const char* to_string(CellUse use);
const char* to_string(ConversionMode mode);

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const RateReport& r);
nlohmann::json to_json(const BaselineReport& r);
nlohmann::json to_json(const Transcript& t);
nlohmann::json to_json(const SecurityEstimate& e);

}  // namespace gausskey
