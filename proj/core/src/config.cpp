#include "starima/config.hpp"

#include "starima/errors.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace starima {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int out = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw DataError("config key '" + key + "': bad integer '" + v + "'");
    }
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long out = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw DataError("config key '" + key + "': bad integer '" + v + "'");
    }
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw DataError("config key '" + key + "': bad number '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw DataError("config key '" + key + "': bad boolean '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream iss(s);
    while (std::getline(iss, field, sep)) out.push_back(trim(field));
    return out;
}

std::vector<SynthRegime> parse_regimes(const std::string& key, const std::string& v) {
    std::vector<SynthRegime> out;
    for (const std::string& part : split(v, ',')) {
        const auto f = split(part, ':');
        if (f.size() != 4) {
            throw DataError("config key '" + key + "': regime '" + part +
                            "' is not start:end:speed:jitter");
        }
        SynthRegime r;
        r.slot_start = parse_long(key, f[0]);
        r.slot_end = parse_long(key, f[1]);
        r.mean_speed = parse_real(key, f[2]);
        r.speed_jitter_sd = parse_real(key, f[3]);
        out.push_back(r);
    }
    return out;
}

std::string regimes_to_string(const std::vector<SynthRegime>& regimes) {
    std::string out;
    for (const SynthRegime& r : regimes) {
        if (!out.empty()) out += ',';
        std::ostringstream oss;
        oss << r.slot_start << ':' << r.slot_end << ':' << r.mean_speed << ':'
            << r.speed_jitter_sd;
        out += oss.str();
    }
    return out;
}

} // namespace

std::vector<int> PipelineConfig::resolved_m_k() const {
    if (!m_k.empty()) return m_k;
    return std::vector<int>(static_cast<std::size_t>(q), lambda);
}

std::string PipelineConfig::resolve(const std::string& relative_path) const {
    if (relative_path.empty() || relative_path.front() == '/') return relative_path;
    if (out_dir.empty() || out_dir == ".") return relative_path;
    return out_dir + "/" + relative_path;
}

PipelineConfig default_config() {
    PipelineConfig cfg;
    // canonical two-regime corridor: slow morning, fast afternoon
    cfg.synth.n_stations = 4;
    cfg.synth.spacing_feet = 16000.0;
    cfg.synth.n_slots = 2880;
    cfg.synth.profile = BaseProfile::two_peak;
    cfg.synth.profile_amplitude = 100.0;
    cfg.synth.noise_sd = 3.0;
    cfg.synth.blend = 0.8;
    cfg.synth.tau_seconds = 30.0;
    cfg.synth.regimes = {{0, 1439, 33.3, 2.0}, {1440, 2879, 66.7, 2.0}};
    cfg.synth.seed = cfg.seed;
    return cfg;
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "data_csv") cfg.data_csv = value;
    else if (key == "network_csv") cfg.network_csv = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
        cfg.synth.seed = cfg.seed;
    }
    else if (key == "smooth.x_speed") cfg.x_speed = parse_int(key, value);
    else if (key == "smooth.x_flow") cfg.x_flow = parse_int(key, value);
    else if (key == "isodata.k_max") cfg.isodata.k_max = parse_int(key, value);
    else if (key == "isodata.n_min") cfg.isodata.n_min = parse_int(key, value);
    else if (key == "isodata.sigma2_max") cfg.isodata.sigma2_max = parse_real(key, value);
    else if (key == "isodata.d_min") cfg.isodata.d_min = parse_real(key, value);
    else if (key == "isodata.max_iter") cfg.isodata.max_iter = parse_int(key, value);
    else if (key == "isodata.k_init") cfg.isodata.k_init = parse_int(key, value);
    else if (key == "isodata.seed") {
        cfg.isodata.seed = static_cast<std::uint64_t>(parse_long(key, value));
    }
    else if (key == "isodata.per_station") cfg.cluster_per_station = parse_bool(key, value);
    else if (key == "partition.delta") cfg.delta = parse_int(key, value);
    else if (key == "ccf.max_lag") cfg.ccf_max_lag = parse_int(key, value);
    else if (key == "starima.lambda") cfg.lambda = parse_int(key, value);
    else if (key == "starima.d") cfg.d = parse_int(key, value);
    else if (key == "starima.q") cfg.q = parse_int(key, value);
    else if (key == "starima.m_k") {
        cfg.m_k.clear();
        for (const std::string& part : split(value, ',')) {
            cfg.m_k.push_back(parse_int(key, part));
        }
    }
    else if (key == "starima.lag_mode") cfg.lag_mode = value;
    else if (key == "starima.pacf_max_lag") cfg.pacf_max_lag = parse_int(key, value);
    else if (key == "starima.per_range_refit") cfg.per_range_refit = parse_bool(key, value);
    else if (key == "forecast.horizon") cfg.horizon = parse_int(key, value);
    else if (key == "synth.n_stations") cfg.synth.n_stations = parse_int(key, value);
    else if (key == "synth.spacing_feet") cfg.synth.spacing_feet = parse_real(key, value);
    else if (key == "synth.n_slots") cfg.synth.n_slots = parse_long(key, value);
    else if (key == "synth.profile") {
        if (value == "flat") cfg.synth.profile = BaseProfile::flat;
        else if (value == "two_peak") cfg.synth.profile = BaseProfile::two_peak;
        else throw DataError("config key 'synth.profile': expected flat or two_peak");
    }
    else if (key == "synth.amplitude") cfg.synth.profile_amplitude = parse_real(key, value);
    else if (key == "synth.noise_sd") cfg.synth.noise_sd = parse_real(key, value);
    else if (key == "synth.blend") cfg.synth.blend = parse_real(key, value);
    else if (key == "synth.tau_seconds") cfg.synth.tau_seconds = parse_real(key, value);
    else if (key == "synth.regimes") cfg.synth.regimes = parse_regimes(key, value);
    else throw DataError("unknown config key '" + key + "'");
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    PipelineConfig cfg = default_config();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected key=value");
        }
        apply_config_entry(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

void save_config(const std::string& path, const PipelineConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "data_csv=" << cfg.data_csv << '\n'
        << "network_csv=" << cfg.network_csv << '\n'
        << "out_dir=" << cfg.out_dir << '\n'
        << "seed=" << cfg.seed << '\n'
        << "smooth.x_speed=" << cfg.x_speed << '\n'
        << "smooth.x_flow=" << cfg.x_flow << '\n'
        << "isodata.k_max=" << cfg.isodata.k_max << '\n'
        << "isodata.n_min=" << cfg.isodata.n_min << '\n'
        << "isodata.sigma2_max=" << cfg.isodata.sigma2_max << '\n'
        << "isodata.d_min=" << cfg.isodata.d_min << '\n'
        << "isodata.max_iter=" << cfg.isodata.max_iter << '\n'
        << "isodata.k_init=" << cfg.isodata.k_init << '\n'
        << "isodata.seed=" << cfg.isodata.seed << '\n'
        << "isodata.per_station=" << (cfg.cluster_per_station ? "true" : "false") << '\n'
        << "partition.delta=" << cfg.delta << '\n'
        << "ccf.max_lag=" << cfg.ccf_max_lag << '\n'
        << "starima.lambda=" << cfg.lambda << '\n'
        << "starima.d=" << cfg.d << '\n'
        << "starima.q=" << cfg.q << '\n';
    if (!cfg.m_k.empty()) {
        out << "starima.m_k=";
        for (std::size_t i = 0; i < cfg.m_k.size(); ++i) {
            out << (i ? "," : "") << cfg.m_k[i];
        }
        out << '\n';
    }
    out << "starima.lag_mode=" << cfg.lag_mode << '\n'
        << "starima.pacf_max_lag=" << cfg.pacf_max_lag << '\n'
        << "starima.per_range_refit=" << (cfg.per_range_refit ? "true" : "false") << '\n'
        << "forecast.horizon=" << cfg.horizon << '\n'
        << "synth.n_stations=" << cfg.synth.n_stations << '\n'
        << "synth.spacing_feet=" << cfg.synth.spacing_feet << '\n'
        << "synth.n_slots=" << cfg.synth.n_slots << '\n'
        << "synth.profile=" << (cfg.synth.profile == BaseProfile::flat ? "flat" : "two_peak")
        << '\n'
        << "synth.amplitude=" << cfg.synth.profile_amplitude << '\n'
        << "synth.noise_sd=" << cfg.synth.noise_sd << '\n'
        << "synth.blend=" << cfg.synth.blend << '\n'
        << "synth.tau_seconds=" << cfg.synth.tau_seconds << '\n'
        << "synth.regimes=" << regimes_to_string(cfg.synth.regimes) << '\n';
}

} // namespace starima
