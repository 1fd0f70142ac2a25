#include "mempoolsim/config.hpp"

#include "mempoolsim/config_text.hpp"
#include "mempoolsim/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mempoolsim {

namespace {

// Engine-level field name -> config key.
const std::map<std::string, std::string, std::less<>>& field_keys() {
    static const std::map<std::string, std::string, std::less<>> keys = {
        {"lambda_lo", "intensity.lambda_lo_per_s"},
        {"lambda_hi", "intensity.lambda_hi_per_s"},
        {"lambda_max", "intensity.lambda_max_per_s"},
        {"period", "intensity.period_s"},
        {"ramp_duration", "intensity.ramp_duration_s"},
        {"fee_mu_log", "attributes.fee_mu_log"},
        {"fee_sigma_log", "attributes.fee_sigma_log"},
        {"size_mu_log", "attributes.size_mu_log"},
        {"size_sigma_log", "attributes.size_sigma_log"},
        {"copula_rho", "attributes.copula_rho"},
        {"min_size", "attributes.min_size_bytes"},
        {"mu", "simulation.mu_per_s"},
        {"capacity", "simulation.capacity_bytes"},
        {"horizon", "simulation.horizon_s"},
        {"warmup", "simulation.warmup_s"},
    };
    return keys;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"", {"seed"}},
        {"intensity",
         {"kind", "lambda_lo_per_s", "lambda_hi_per_s", "period_s", "ramp_duration_s",
          "lambda_max_per_s"}},
        {"attributes",
         {"fee_mu_log", "fee_sigma_log", "size_mu_log", "size_sigma_log", "copula_rho",
          "min_size_bytes"}},
        {"simulation", {"mu_per_s", "capacity_bytes", "strategy", "horizon_s", "warmup_s"}},
        {"experiment",
         {"sweep_capacities_bytes", "sweep_strategies", "replications", "output_dir", "threads"}},
        {"game", {"mode", "strategies", "capacities_bytes", "replications", "common_random_numbers"}},
    };
    return keys;
}

std::vector<std::uint64_t> default_sweep_capacities() {
    std::vector<std::uint64_t> out;
    for (std::uint64_t mb = 1; mb <= 8; ++mb) out.push_back(mb * kMegabyte);
    return out;
}

class TableReader {
public:
    TableReader(const ConfigDocument& doc, std::string table) : table_name_(std::move(table)) {
        const auto it = doc.tables.find(table_name_);
        if (it != doc.tables.end()) table_ = &it->second;
    }

    const ConfigValue* find(const std::string& key) const {
        if (table_ == nullptr) return nullptr;
        const auto it = table_->find(key);
        return it == table_->end() ? nullptr : &it->second;
    }

    std::string path(const std::string& key) const {
        return table_name_.empty() ? key : table_name_ + "." + key;
    }

    void read(const std::string& key, double& out) const {
        if (const ConfigValue* v = find(key)) out = v->as_double(path(key));
    }
    void read(const std::string& key, std::uint64_t& out) const {
        if (const ConfigValue* v = find(key)) out = v->as_uint(path(key));
    }
    void read(const std::string& key, std::uint32_t& out) const {
        if (const ConfigValue* v = find(key)) {
            const std::uint64_t x = v->as_uint(path(key));
            if (x > UINT32_MAX) throw ConfigError(path(key), "out of range");
            out = static_cast<std::uint32_t>(x);
        }
    }
    void read(const std::string& key, bool& out) const {
        if (const ConfigValue* v = find(key)) out = v->as_bool(path(key));
    }
    void read(const std::string& key, std::string& out) const {
        if (const ConfigValue* v = find(key)) out = v->as_string(path(key));
    }
    void read(const std::string& key, Strategy& out) const {
        if (const ConfigValue* v = find(key)) out = strategy(*v, key);
    }
    void read(const std::string& key, std::vector<Strategy>& out) const {
        if (const ConfigValue* v = find(key)) {
            out.clear();
            for (const ConfigValue& item : v->as_array(path(key))) out.push_back(strategy(item, key));
        }
    }
    void read(const std::string& key, std::vector<std::uint64_t>& out) const {
        if (const ConfigValue* v = find(key)) {
            out.clear();
            for (const ConfigValue& item : v->as_array(path(key))) out.push_back(item.as_uint(path(key)));
        }
    }

private:
    Strategy strategy(const ConfigValue& v, const std::string& key) const {
        try {
            return parse_strategy(v.as_string(path(key)));
        } catch (const std::invalid_argument& e) {
            throw ParseError(v.line, path(key) + ": " + e.what());
        }
    }

    std::string table_name_;
    const ConfigTable* table_ = nullptr;
};

void reject_unknown_keys(const ConfigDocument& doc) {
    const auto& known = known_keys();
    for (const auto& [table, entries] : doc.tables) {
        const auto k = known.find(table);
        if (k == known.end()) {
            throw ParseError(doc.table_lines.at(table), "unknown table [" + table + "]");
        }
        for (const auto& [key, value] : entries)
            if (!k->second.contains(key))
                throw ParseError(value.line, "unknown key '" + key + "'" +
                                                 (table.empty() ? "" : " in [" + table + "]"));
    }
}

std::string capacity_list(const std::vector<std::uint64_t>& caps) {
    std::string out = "[";
    for (std::size_t i = 0; i < caps.size(); ++i) out += (i ? ", " : "") + std::to_string(caps[i]);
    return out + "]";
}

std::string strategy_list(const std::vector<Strategy>& strategies) {
    std::string out = "[";
    for (std::size_t i = 0; i < strategies.size(); ++i)
        out += (i ? ", " : "") + quote(to_string(strategies[i]));
    return out + "]";
}

}  // namespace

ExperimentSpec::ExperimentSpec() : sweep_capacities(default_sweep_capacities()) {
    base.warmup = SimConfig::default_warmup(base.horizon);
    base.intensity.ramp_duration = base.horizon;
}

std::string_view to_string(IntensityKind kind) {
    switch (kind) {
    case IntensityKind::Constant: return "constant";
    case IntensityKind::Sinusoid: return "sinusoid";
    case IntensityKind::LinearRamp: return "linear_ramp";
    }
    return "unknown";
}

IntensityKind parse_intensity_kind(std::string_view name) {
    if (name == "constant") return IntensityKind::Constant;
    if (name == "sinusoid") return IntensityKind::Sinusoid;
    if (name == "linear_ramp") return IntensityKind::LinearRamp;
    throw std::invalid_argument("unknown intensity kind '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
    try {
        base.validate();
    } catch (const ConfigError& e) {
        const auto it = field_keys().find(e.field());
        const std::string key = it == field_keys().end() ? e.field() : it->second;
        std::string what = e.what();
        throw ConfigError(key, what.substr(what.find(": ") + 2));
    }
    if (sweep_capacities.empty())
        throw ConfigError("experiment.sweep_capacities_bytes", "must be nonempty");
    for (std::uint64_t c : sweep_capacities)
        if (c < base.attributes.min_size)
            throw ConfigError("experiment.sweep_capacities_bytes",
                              "every capacity must be >= attributes.min_size_bytes");
    if (sweep_strategies.empty()) throw ConfigError("experiment.sweep_strategies", "must be nonempty");
    if (replications < 1) throw ConfigError("experiment.replications", "must be >= 1");
    if (output_dir.empty()) throw ConfigError("experiment.output_dir", "must be nonempty");
    if (game.strategies.empty()) throw ConfigError("game.strategies", "must be nonempty");
    if (game.capacities.empty()) throw ConfigError("game.capacities_bytes", "must be nonempty");
    for (std::uint64_t c : game.capacities)
        if (c < base.attributes.min_size)
            throw ConfigError("game.capacities_bytes",
                              "every capacity must be >= attributes.min_size_bytes");
    if (game.replications < 1) throw ConfigError("game.replications", "must be >= 1");
}

ExperimentSpec parse_config(std::string_view text) {
    const ConfigDocument doc = parse_config_text(text);
    reject_unknown_keys(doc);

    ExperimentSpec spec;
    SimConfig& base = spec.base;

    TableReader(doc, "").read("seed", base.seed);

    const TableReader intensity(doc, "intensity");
    if (const ConfigValue* kind = intensity.find("kind")) {
        try {
            base.intensity.kind = parse_intensity_kind(kind->as_string("intensity.kind"));
        } catch (const std::invalid_argument& e) {
            throw ParseError(kind->line, std::string("intensity.kind: ") + e.what());
        }
    }
    intensity.read("lambda_lo_per_s", base.intensity.lambda_lo);
    intensity.read("lambda_hi_per_s", base.intensity.lambda_hi);
    if (base.intensity.kind == IntensityKind::Constant && !intensity.find("lambda_hi_per_s"))
        base.intensity.lambda_hi = base.intensity.lambda_lo;
    intensity.read("period_s", base.intensity.period);
    intensity.read("lambda_max_per_s", base.intensity.lambda_max);

    const TableReader attributes(doc, "attributes");
    attributes.read("fee_mu_log", base.attributes.fee_mu_log);
    attributes.read("fee_sigma_log", base.attributes.fee_sigma_log);
    attributes.read("size_mu_log", base.attributes.size_mu_log);
    attributes.read("size_sigma_log", base.attributes.size_sigma_log);
    attributes.read("copula_rho", base.attributes.copula_rho);
    attributes.read("min_size_bytes", base.attributes.min_size);

    const TableReader simulation(doc, "simulation");
    simulation.read("mu_per_s", base.mu);
    simulation.read("capacity_bytes", base.capacity);
    simulation.read("strategy", base.strategy);
    simulation.read("horizon_s", base.horizon);
    base.warmup = SimConfig::default_warmup(base.horizon);
    simulation.read("warmup_s", base.warmup);
    base.intensity.ramp_duration = base.horizon;
    intensity.read("ramp_duration_s", base.intensity.ramp_duration);

    const TableReader experiment(doc, "experiment");
    experiment.read("sweep_capacities_bytes", spec.sweep_capacities);
    experiment.read("sweep_strategies", spec.sweep_strategies);
    experiment.read("replications", spec.replications);
    experiment.read("output_dir", spec.output_dir);
    std::uint32_t threads = spec.threads;
    experiment.read("threads", threads);
    spec.threads = threads;

    const TableReader game(doc, "game");
    if (const ConfigValue* mode = game.find("mode")) {
        try {
            spec.game.mode = parse_game_mode(mode->as_string("game.mode"));
        } catch (const std::invalid_argument& e) {
            throw ParseError(mode->line, std::string("game.mode: ") + e.what());
        }
    }
    game.read("strategies", spec.game.strategies);
    game.read("capacities_bytes", spec.game.capacities);
    game.read("replications", spec.game.replications);
    game.read("common_random_numbers", spec.game.common_random_numbers);

    spec.validate();
    return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string echo_config(const ExperimentSpec& spec) {
    const SimConfig& b = spec.base;
    std::ostringstream out;
    out << "seed = " << b.seed << "\n\n";
    out << "[intensity]\n"
        << "kind = " << quote(to_string(b.intensity.kind)) << "\n"
        << "lambda_lo_per_s = " << format_exact(b.intensity.lambda_lo) << "\n"
        << "lambda_hi_per_s = " << format_exact(b.intensity.lambda_hi) << "\n"
        << "period_s = " << format_exact(b.intensity.period) << "\n"
        << "ramp_duration_s = " << format_exact(b.intensity.ramp_duration) << "\n"
        << "lambda_max_per_s = " << format_exact(b.intensity.lambda_max) << "\n\n";
    out << "[attributes]\n"
        << "fee_mu_log = " << format_exact(b.attributes.fee_mu_log) << "\n"
        << "fee_sigma_log = " << format_exact(b.attributes.fee_sigma_log) << "\n"
        << "size_mu_log = " << format_exact(b.attributes.size_mu_log) << "\n"
        << "size_sigma_log = " << format_exact(b.attributes.size_sigma_log) << "\n"
        << "copula_rho = " << format_exact(b.attributes.copula_rho) << "\n"
        << "min_size_bytes = " << b.attributes.min_size << "\n\n";
    out << "[simulation]\n"
        << "mu_per_s = " << format_exact(b.mu) << "\n"
        << "capacity_bytes = " << b.capacity << "\n"
        << "strategy = " << quote(to_string(b.strategy)) << "\n"
        << "horizon_s = " << format_exact(b.horizon) << "\n"
        << "warmup_s = " << format_exact(b.warmup) << "\n\n";
    out << "[experiment]\n"
        << "sweep_capacities_bytes = " << capacity_list(spec.sweep_capacities) << "\n"
        << "sweep_strategies = " << strategy_list(spec.sweep_strategies) << "\n"
        << "replications = " << spec.replications << "\n"
        << "output_dir = " << quote(spec.output_dir) << "\n"
        << "threads = " << spec.threads << "\n\n";
    out << "[game]\n"
        << "mode = " << quote(to_string(spec.game.mode)) << "\n"
        << "strategies = " << strategy_list(spec.game.strategies) << "\n"
        << "capacities_bytes = " << capacity_list(spec.game.capacities) << "\n"
        << "replications = " << spec.game.replications << "\n"
        << "common_random_numbers = " << (spec.game.common_random_numbers ? "true" : "false")
        << "\n";
    return out.str();
}

}  // namespace mempoolsim
