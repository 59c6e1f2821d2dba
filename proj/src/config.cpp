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

#include "ssac/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace ssac {

namespace {

using nlohmann::json;

// Reads fields from one JSON object and rejects keys nobody asked for.
class Section {
public:
    Section(const json& doc, std::string name) : name_(std::move(name)) {
        if (doc.contains(name_)) {
            obj_ = &doc.at(name_);
            if (!obj_->is_object()) throw std::runtime_error("config section '" + name_ + "' must be an object");
        }
    }

    template <class T>
    void get(const std::string& key, T& out) {
        known_.insert(key);
        if (obj_ == nullptr || !obj_->contains(key)) return;
        try {
            out = obj_->at(key).get<T>();
        } catch (const json::exception& e) {
            throw std::runtime_error("config field '" + name_ + "." + key + "': " + e.what());
        }
    }

    const json* raw(const std::string& key) {
        known_.insert(key);
        if (obj_ == nullptr || !obj_->contains(key)) return nullptr;
        return &obj_->at(key);
    }

    void finish() const {
        if (obj_ == nullptr) return;
        for (const auto& [key, value] : obj_->items()) {
            if (!known_.contains(key)) throw std::runtime_error("unknown config field '" + name_ + "." + key + "'");
        }
    }

private:
    std::string name_;
    const json* obj_ = nullptr;
    std::set<std::string> known_;
};

json state_to_json(const State& s) { return json::array({s.theta1, s.theta2, s.dtheta1, s.dtheta2}); }

State state_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 4) throw std::runtime_error("a state needs exactly four components");
    return {v[0], v[1], v[2], v[3]};
}

std::string critic_name(PolicyCritic c) { return c == PolicyCritic::kMin ? "min" : "first"; }

PolicyCritic critic_from_name(const std::string& s) {
    if (s == "min") return PolicyCritic::kMin;
    if (s == "first") return PolicyCritic::kFirst;
    throw std::runtime_error("sac.policy_critic must be 'min' or 'first'");
}

std::string labels_name(GateLabels l) { return l == GateLabels::kEngaged ? "engaged" : "all"; }

GateLabels labels_from_name(const std::string& s) {
    if (s == "engaged") return GateLabels::kEngaged;
    if (s == "all") return GateLabels::kAll;
    throw std::runtime_error("gate.joint_labels must be 'engaged' or 'all'");
}

std::string balance_name(GateBalance b) { return b == GateBalance::kPretraining ? "pretraining" : "current"; }

GateBalance balance_from_name(const std::string& s) {
    if (s == "pretraining") return GateBalance::kPretraining;
    if (s == "current") return GateBalance::kCurrent;
    throw std::runtime_error("gate.joint_balance must be 'pretraining' or 'current'");
}

}  // namespace

LqrGains RunConfig::balance_controller() const {
    LqrGains g = lqr;
    g.saturation = lqr_saturation.value_or(sac.torque_limit);
    return g;
}

void RunConfig::validate() const {
    dynamics.validate();
    goal.validate();
    balance_controller().validate();
    sac.validate();
    gate.validate();
    schedule.validate();
    balance_map.validate();
    if (replay.general == 0 || replay.gate == 0) throw std::invalid_argument("replay capacities must be positive");
}

json to_json(const RunConfig& c) {
    json q = json::array();
    for (int r = 0; r < 4; ++r) q.push_back({c.lqr.Q(r, 0), c.lqr.Q(r, 1), c.lqr.Q(r, 2), c.lqr.Q(r, 3)});
    return {
        {"dynamics",
         {{"m1", c.dynamics.m1}, {"m2", c.dynamics.m2}, {"l1", c.dynamics.l1}, {"l2", c.dynamics.l2},
          {"lc1", c.dynamics.lc1}, {"lc2", c.dynamics.lc2}, {"I1", c.dynamics.I1}, {"I2", c.dynamics.I2},
          {"gravity", c.dynamics.gravity}, {"dt_sim", c.dynamics.dt_sim}, {"dt_ctrl", c.dynamics.dt_ctrl}}},
        {"goal",
         {{"state", state_to_json(c.goal.goal)}, {"eps_thr", c.goal.eps_thr}, {"lookback", c.goal.lookback},
          {"episode_len", c.goal.episode_len}}},
        {"lqr",
         {{"K", {c.lqr.K(0), c.lqr.K(1), c.lqr.K(2), c.lqr.K(3)}},
          {"Q", q},
          {"R", c.lqr.R},
          {"saturation", !c.lqr_saturation                   ? json(nullptr)
                         : std::isinf(*c.lqr_saturation) ? json("none")
                                                         : json(*c.lqr_saturation)}}},
        {"sac",
         {{"discount", c.sac.discount}, {"alpha", c.sac.alpha}, {"polyak", c.sac.polyak},
          {"replay_batch", c.sac.replay_batch}, {"minibatch", c.sac.minibatch},
          {"updates_per_event", c.sac.updates_per_event}, {"success_prob", c.sac.success_prob},
          {"learning_rate", c.sac.learning_rate}, {"policy_critic", critic_name(c.sac.policy_critic)},
          {"torque_limit", c.sac.torque_limit}}},
        {"gate",
         {{"class_weight", c.gate.class_weight}, {"learning_rate", c.gate.learning_rate},
          {"on_threshold", c.gate.on_threshold}, {"off_threshold", c.gate.off_threshold},
          {"update_period", c.gate.update_period}, {"minibatch", c.gate.minibatch},
          {"joint_labels", labels_name(c.gate.joint_labels)}, {"joint_balance", balance_name(c.gate.joint_balance)}}},
        {"schedule",
         {{"gate_pretrain_steps", c.schedule.gate_pretrain_steps}, {"joint_steps", c.schedule.joint_steps},
          {"exploration_steps", c.schedule.exploration_steps}, {"steps_per_update", c.schedule.steps_per_update},
          {"checkpoint_every", c.schedule.checkpoint_every}, {"seed", c.schedule.seed}}},
        {"replay", {{"general_capacity", c.replay.general}, {"gate_capacity", c.replay.gate}}},
        {"balance_map", {{"n_theta1", c.balance_map.n_theta1}, {"n_theta2", c.balance_map.n_theta2}}},
    };
}

RunConfig run_config_from_json(const json& doc) {
    if (!doc.is_object()) throw std::runtime_error("config must be a JSON object");
    static const std::set<std::string> sections{"dynamics", "goal", "lqr", "sac", "gate", "schedule", "replay",
                                                "balance_map"};
    for (const auto& [key, value] : doc.items()) {
        if (!sections.contains(key)) throw std::runtime_error("unknown config section '" + key + "'");
    }
    RunConfig c;

    Section d(doc, "dynamics");
    d.get("m1", c.dynamics.m1);
    d.get("m2", c.dynamics.m2);
    d.get("l1", c.dynamics.l1);
    d.get("l2", c.dynamics.l2);
    d.get("lc1", c.dynamics.lc1);
    d.get("lc2", c.dynamics.lc2);
    d.get("I1", c.dynamics.I1);
    d.get("I2", c.dynamics.I2);
    d.get("gravity", c.dynamics.gravity);
    d.get("dt_sim", c.dynamics.dt_sim);
    d.get("dt_ctrl", c.dynamics.dt_ctrl);
    d.finish();

    Section g(doc, "goal");
    if (const json* s = g.raw("state")) c.goal.goal = state_from_json(*s);
    g.get("eps_thr", c.goal.eps_thr);
    g.get("lookback", c.goal.lookback);
    g.get("episode_len", c.goal.episode_len);
    g.finish();

    Section l(doc, "lqr");
    try {
        if (const json* k = l.raw("K")) {
            const auto v = k->get<std::vector<double>>();
            if (v.size() != 4) throw std::runtime_error("lqr.K needs four entries");
            c.lqr.K << v[0], v[1], v[2], v[3];
        }
        if (const json* q = l.raw("Q")) {
            const auto rows = q->get<std::vector<std::vector<double>>>();
            if (rows.size() != 4) throw std::runtime_error("lqr.Q must be 4x4");
            for (int r = 0; r < 4; ++r) {
                if (rows[r].size() != 4) throw std::runtime_error("lqr.Q must be 4x4");
                for (int col = 0; col < 4; ++col) c.lqr.Q(r, col) = rows[r][col];
            }
        }
        if (const json* s = l.raw("saturation"); s != nullptr && !s->is_null()) {
            if (s->is_string()) {
                if (s->get<std::string>() != "none") throw std::runtime_error("lqr.saturation: number, null or \"none\"");
                c.lqr_saturation = std::numeric_limits<double>::infinity();
            } else {
                c.lqr_saturation = s->get<double>();
            }
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config section 'lqr': ") + e.what());
    }
    l.get("R", c.lqr.R);
    l.finish();

    Section s(doc, "sac");
    s.get("discount", c.sac.discount);
    s.get("alpha", c.sac.alpha);
    s.get("polyak", c.sac.polyak);
    s.get("replay_batch", c.sac.replay_batch);
    s.get("minibatch", c.sac.minibatch);
    s.get("updates_per_event", c.sac.updates_per_event);
    s.get("success_prob", c.sac.success_prob);
    s.get("learning_rate", c.sac.learning_rate);
    std::string critic = critic_name(c.sac.policy_critic);
    s.get("policy_critic", critic);
    c.sac.policy_critic = critic_from_name(critic);
    s.get("torque_limit", c.sac.torque_limit);
    s.finish();

    Section gt(doc, "gate");
    gt.get("class_weight", c.gate.class_weight);
    gt.get("learning_rate", c.gate.learning_rate);
    gt.get("on_threshold", c.gate.on_threshold);
    gt.get("off_threshold", c.gate.off_threshold);
    gt.get("update_period", c.gate.update_period);
    gt.get("minibatch", c.gate.minibatch);
    std::string labels = labels_name(c.gate.joint_labels);
    gt.get("joint_labels", labels);
    c.gate.joint_labels = labels_from_name(labels);
    std::string balance = balance_name(c.gate.joint_balance);
    gt.get("joint_balance", balance);
    c.gate.joint_balance = balance_from_name(balance);
    gt.finish();

    Section sc(doc, "schedule");
    sc.get("gate_pretrain_steps", c.schedule.gate_pretrain_steps);
    sc.get("joint_steps", c.schedule.joint_steps);
    sc.get("exploration_steps", c.schedule.exploration_steps);
    sc.get("steps_per_update", c.schedule.steps_per_update);
    sc.get("checkpoint_every", c.schedule.checkpoint_every);
    sc.get("seed", c.schedule.seed);
    sc.finish();

    Section r(doc, "replay");
    r.get("general_capacity", c.replay.general);
    r.get("gate_capacity", c.replay.gate);
    r.finish();

    Section b(doc, "balance_map");
    b.get("n_theta1", c.balance_map.n_theta1);
    b.get("n_theta2", c.balance_map.n_theta2);
    b.finish();

    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("invalid config: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return run_config_from_json(doc);
}

void save_run_config(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file " + path.string());
    out << to_json(cfg).dump(2) << '\n';
}

}  // namespace ssac
