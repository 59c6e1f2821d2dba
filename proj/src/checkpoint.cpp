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

#include "ssac/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "ssac/observation.hpp"

namespace ssac {

namespace {

constexpr int kCheckpointVersion = 1;
constexpr const char* kKind = "ssac-checkpoint";

struct Slot {
    const char* name;
    std::optional<Mlp> Checkpoint::*member;
    std::vector<int> sizes;
    Head head;
};

std::vector<Slot> slots() {
    const int h = kHiddenWidth;
    const int obs = kObservationSize;
    return {
        {"policy", &Checkpoint::policy, {obs, h, h, h, 2}, Head::kGaussian},
        {"value", &Checkpoint::value, {obs, h, h, h, 1}, Head::kIdentity},
        {"target_value", &Checkpoint::target_value, {obs, h, h, h, 1}, Head::kIdentity},
        {"q1", &Checkpoint::q1, {obs + 1, h, h, h, 1}, Head::kIdentity},
        {"q2", &Checkpoint::q2, {obs + 1, h, h, h, 1}, Head::kIdentity},
        {"gate", &Checkpoint::gate, {obs, 32, 32, 1}, Head::kSigmoid},
    };
}

}  // namespace

Checkpoint make_checkpoint(const Trainer& trainer, long env_steps) {
    Checkpoint c;
    c.config = trainer.config();
    c.vanilla = trainer.options().vanilla;
    c.env_steps = env_steps;
    const SacNets& n = trainer.nets();
    c.policy = n.policy;
    c.value = n.value;
    c.target_value = n.target_value;
    c.q1 = n.q1;
    c.q2 = n.q2;
    if (!c.vanilla) c.gate = trainer.gate();
    return c;
}

Checkpoint make_gate_checkpoint(const RunConfig& config, const Mlp& gate) {
    Checkpoint c;
    c.config = config;
    c.gate = gate;
    return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    nlohmann::json nets = nlohmann::json::object();
    for (const Slot& s : slots()) {
        if ((ckpt.*s.member).has_value()) nets[s.name] = to_json(*(ckpt.*s.member));
    }
    const nlohmann::json doc{{"format_version", kCheckpointVersion}, {"kind", kKind},
                             {"vanilla", ckpt.vanilla},         {"env_steps", ckpt.env_steps},
                             {"config", to_json(ckpt.config)},  {"networks", nets}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
    out << doc.dump() << '\n';
    if (!out) throw std::runtime_error("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("checkpoint " + path.string() + " is corrupt: " + e.what());
    }
    try {
        if (doc.at("kind").get<std::string>() != kKind || doc.at("format_version").get<int>() != kCheckpointVersion) {
            throw std::runtime_error("unsupported checkpoint format");
        }
        Checkpoint c;
        c.config = run_config_from_json(doc.at("config"));
        c.vanilla = doc.at("vanilla").get<bool>();
        c.env_steps = doc.at("env_steps").get<long>();
        const auto& nets = doc.at("networks");
        for (const Slot& s : slots()) {
            if (nets.contains(s.name)) c.*s.member = mlp_from_json(nets.at(s.name), s.sizes, s.head);
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("checkpoint " + path.string() + " is malformed: " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error("checkpoint " + path.string() + ": " + e.what());
    }
}

Agent agent_from_checkpoint(const Checkpoint& ckpt, bool lqr_only) {
    Agent a;
    a.lqr = ckpt.config.balance_controller();
    a.on_threshold = ckpt.config.gate.on_threshold;
    a.off_threshold = ckpt.config.gate.off_threshold;
    a.torque_limit = ckpt.config.sac.torque_limit;
    if (lqr_only) {
        a.gate_mode = GateMode::kAlwaysOn;
        return a;
    }
    if (!ckpt.policy) throw std::runtime_error("checkpoint has no policy network");
    a.policy = &*ckpt.policy;
    if (ckpt.vanilla) {
        a.gate_mode = GateMode::kAlwaysOff;
    } else {
        if (!ckpt.gate) throw std::runtime_error("checkpoint has no gate network");
        a.gate = &*ckpt.gate;
        a.gate_mode = GateMode::kNetwork;
    }
    return a;
}

}  // namespace ssac
