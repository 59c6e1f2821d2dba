/*
 Copyright 2026 The ssac Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "ssac/artifacts.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

namespace ssac {

namespace {

double parse_double(const std::string& field) {
    double v = 0.0;
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end) throw std::runtime_error("bad numeric field: " + field);
    return v;
}

long parse_long(const std::string& field) {
    std::size_t used = 0;
    const long v = std::stol(field, &used);
    if (used != field.size()) throw std::runtime_error("bad integer field: " + field);
    return v;
}

bool parse_flag(const std::string& field) {
    if (field == "0") return false;
    if (field == "1") return true;
    throw std::runtime_error("bad boolean field: " + field);
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

const std::vector<std::string>& training_log_columns() {
    static const std::vector<std::string> columns = {
        "episode",      "env_steps",    "return",         "success",    "gate_engaged_steps",
        "general_size", "success_size", "gate_size",      "q_loss",     "policy_loss",
        "value_loss",   "entropy",      "gate_loss"};
    return columns;
}

std::vector<std::string> training_log_fields(const LogRow& r) {
    return {std::to_string(r.episode),       std::to_string(r.env_steps),    format_double(r.episode_return),
            flag(r.success),                 std::to_string(r.gate_engaged_steps),
            std::to_string(r.general_size),  std::to_string(r.success_size), std::to_string(r.gate_size),
            format_double(r.q_loss),         format_double(r.policy_loss),   format_double(r.value_loss),
            format_double(r.entropy),        format_double(r.gate_loss)};
}

LogRow parse_training_log_row(const CsvTable& table, std::size_t i) {
    const auto& row = table.rows.at(i);
    auto at = [&](const char* name) -> const std::string& { return row.at(table.column(name)); };
    LogRow r;
    r.episode = parse_long(at("episode"));
    r.env_steps = parse_long(at("env_steps"));
    r.episode_return = parse_double(at("return"));
    r.success = parse_flag(at("success"));
    r.gate_engaged_steps = static_cast<int>(parse_long(at("gate_engaged_steps")));
    r.general_size = static_cast<std::size_t>(parse_long(at("general_size")));
    r.success_size = static_cast<std::size_t>(parse_long(at("success_size")));
    r.gate_size = static_cast<std::size_t>(parse_long(at("gate_size")));
    r.q_loss = parse_double(at("q_loss"));
    r.policy_loss = parse_double(at("policy_loss"));
    r.value_loss = parse_double(at("value_loss"));
    r.entropy = parse_double(at("entropy"));
    r.gate_loss = parse_double(at("gate_loss"));
    return r;
}

void write_gate_dataset(const std::filesystem::path& path, std::span<const GateSample> samples) {
    CsvWriter out(path, {"theta1", "theta2", "dtheta1", "dtheta2", "label"});
    for (const GateSample& g : samples) {
        out.row({format_double(g.state.theta1), format_double(g.state.theta2), format_double(g.state.dtheta1),
                 format_double(g.state.dtheta2), flag(g.label)});
    }
}

std::vector<GateSample> read_gate_dataset(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t c1 = t.column("theta1"), c2 = t.column("theta2"), c3 = t.column("dtheta1"),
                      c4 = t.column("dtheta2"), cl = t.column("label");
    std::vector<GateSample> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        out.push_back({{parse_double(row.at(c1)), parse_double(row.at(c2)), parse_double(row.at(c3)),
                        parse_double(row.at(c4))},
                       parse_flag(row.at(cl))});
    }
    return out;
}

void write_trace(const std::filesystem::path& path, const EpisodeRecord& ep, double dt_ctrl) {
    CsvWriter out(path, {"time", "theta1", "theta2", "dtheta1", "dtheta2", "torque", "gate"});
    for (std::size_t t = 0; t < ep.states.size(); ++t) {
        const State& s = ep.states[t];
        const bool has_action = t < ep.actions.size();
        const double torque = has_action ? ep.actions[t] : std::numeric_limits<double>::quiet_NaN();
        const bool gate = has_action ? ep.gate[t] : (!ep.gate.empty() && ep.gate.back());
        out.row({format_double(static_cast<double>(t) * dt_ctrl), format_double(s.theta1), format_double(s.theta2),
                 format_double(s.dtheta1), format_double(s.dtheta2), format_double(torque), flag(gate)});
    }
}

void write_balance_map(const std::filesystem::path& path, std::span<const BalanceCell> cells) {
    CsvWriter out(path, {"theta1", "theta2", "success"});
    for (const BalanceCell& c : cells) out.row({format_double(c.theta1), format_double(c.theta2), flag(c.success)});
}

std::vector<BalanceCell> read_balance_map(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t c1 = t.column("theta1"), c2 = t.column("theta2"), cs = t.column("success");
    std::vector<BalanceCell> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) out.push_back({parse_double(row.at(c1)), parse_double(row.at(c2)), parse_flag(row.at(cs))});
    return out;
}

}  // namespace ssac
