#include "funnelkit/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "funnelkit/errors.hpp"

namespace funnelkit {

using nlohmann::json;

json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return json::parse(buf);
}

json json_numbers(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(json_number(x));
  return arr;
}

json channel_to_json(const Channel& ch) {
  json j;
  j["in"] = ch.in_alphabet;
  j["out"] = ch.out_alphabet;
  json rows = json::array();
  for (std::size_t x = 0; x < ch.in_size(); ++x) {
    json row = json::array();
    for (std::size_t y = 0; y < ch.out_size(); ++y) row.push_back(json_number(ch.at(x, y)));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

Channel channel_from_json(const json& j) {
  Channel ch;
  try {
    for (const auto& v : j.at("in")) ch.in_alphabet.push_back(v.get<std::string>());
    for (const auto& v : j.at("out")) ch.out_alphabet.push_back(v.get<std::string>());
    for (const auto& row : j.at("rows")) {
      if (row.size() != ch.out_alphabet.size())
        throw ParseError("channel: row width does not match output alphabet");
      for (const auto& v : row) ch.rows.push_back(v.get<double>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("channel: ") + e.what());
  }
  if (ch.rows.size() != ch.in_alphabet.size() * ch.out_alphabet.size())
    throw ParseError("channel: row count does not match input alphabet");
  ch.validate();
  for (std::size_t x = 0; x < ch.in_size(); ++x) {
    double total = 0.0;
    for (std::size_t y = 0; y < ch.out_size(); ++y) total += ch.at(x, y);
    for (std::size_t y = 0; y < ch.out_size(); ++y) ch.at(x, y) /= total;
  }
  return ch;
}

Channel load_channel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open channel file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("channel file " + path.string() + ": " + e.what());
  }
  if (j.is_object() && j.contains("product_channel")) {
    if (j.at("product_channel").is_null())
      throw ParseError("bundle has no materialized product channel: " + path.string());
    return channel_from_json(j.at("product_channel"));
  }
  return channel_from_json(j);
}

json metrics_to_json(const MechanismMetrics& m) {
  json j;
  j["leakage_bits"] = json_number(m.leakage_bits);
  j["utility_bits"] = json_numbers(m.utility_bits);
  j["rate_bits"] = json_number(m.rate_bits);
  j["per_component_bits"] = json_numbers(m.per_component_bits);
  return j;
}

json allocation_to_json(const Allocation& a) {
  json j;
  j["status"] = a.status == Allocation::Status::optimal ? "optimal" : "infeasible";
  if (a.status == Allocation::Status::optimal) {
    j["alphas"] = json_numbers(a.alphas);
    j["taus"] = json_numbers(a.taus);
    j["leakage_per_component"] = json_numbers(a.leakage_per_component);
    j["total_leakage_bits"] = json_number(a.total_leakage_bits);
  } else {
    j["taus"] = json_numbers(a.taus);
    j["violated_tasks"] = a.violated_tasks;
  }
  return j;
}

json bundle_to_json(const MechanismBundle& b) {
  json j;
  j["allocation"] = allocation_to_json(b.allocation);
  json comps = json::array();
  for (const auto& sol : b.solutions) {
    json jc;
    jc["alpha_bits"] = json_number(sol.alpha_bits);
    jc["tau_bits"] = json_number(sol.tau_bits);
    jc["leakage_bits"] = json_number(sol.leakage_bits);
    if (sol.mix_p) jc["mix_p"] = json_number(*sol.mix_p);
    jc["channel"] = channel_to_json(sol.channel);
    comps.push_back(std::move(jc));
  }
  j["components"] = std::move(comps);
  j["product_channel"] = b.product ? channel_to_json(*b.product) : json(nullptr);
  j["metrics"] = metrics_to_json(b.metrics);
  return j;
}

json parallelization_report_to_json(const ParallelizationReport& r) {
  json j;
  j["original"] = metrics_to_json(r.original);
  j["transformed"] = metrics_to_json(r.transformed);
  j["product_form_ok"] = r.product_form_ok;
  json deltas;
  deltas["leakage_bits"] = json_number(r.leakage_delta);
  deltas["rate_bits"] = json_number(r.rate_delta);
  deltas["utility_bits"] = json_numbers(r.utility_deltas);
  deltas["per_component_bits"] = json_numbers(r.per_component_deltas);
  j["deltas"] = std::move(deltas);
  return j;
}

json dp_report_to_json(const DpReport& r) {
  json j;
  j["epsilon_nats"] = json_number(r.epsilon_nats);
  j["epsilon_bits"] = json_number(r.epsilon_nats / std::log(2.0));
  if (r.witness) {
    json w;
    w["y"] = r.witness->y;
    w["s"] = r.witness->s;
    w["s_neighbor"] = r.witness->s_neighbor;
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

}  // namespace funnelkit
