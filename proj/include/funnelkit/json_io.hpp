#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "funnelkit/allocation.hpp"
#include "funnelkit/channel.hpp"
#include "funnelkit/dp.hpp"
#include "funnelkit/parallelize.hpp"

namespace funnelkit {

// Report numbers carry 12 significant digits; infinities serialize as the
// strings "inf"/"-inf" (JSON has no infinity literal).
nlohmann::json json_number(double v);
nlohmann::json json_numbers(const std::vector<double>& v);

nlohmann::json channel_to_json(const Channel& ch);
Channel channel_from_json(const nlohmann::json& j);

// Accepts a bare channel object or a solve --emit-mechanism bundle (uses its
// "product_channel"). Rows are normalized at load.
Channel load_channel_file(const std::filesystem::path& path);

nlohmann::json metrics_to_json(const MechanismMetrics& m);
nlohmann::json allocation_to_json(const Allocation& a);
nlohmann::json bundle_to_json(const MechanismBundle& b);
nlohmann::json parallelization_report_to_json(const ParallelizationReport& r);
nlohmann::json dp_report_to_json(const DpReport& r);

}  // namespace funnelkit
