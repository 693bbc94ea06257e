#include "starima/csv.hpp"

#include "starima/errors.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace starima {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream iss(line);
    while (std::getline(iss, field, ',')) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_real(const std::string& s, const std::string& path, std::size_t line_no,
                  const char* what) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw DataError(path + ":" + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    }
    return v;
}

long parse_slot(const std::string& s, const std::string& path, std::size_t line_no) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw DataError(path + ":" + std::to_string(line_no) + ": bad slot '" + s + "'");
    }
    return v;
}

void expect_header(const std::string& got, const std::string& want, const std::string& path) {
    if (trim(got) != want) {
        throw DataError(path + ": expected header '" + want + "'");
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return in;
}

} // namespace

std::string format_double(double v) {
    // round-trippable and canonical: shortest representation first,
    // widened only when it does not parse back exactly
    for (int prec = 15; prec <= 17; ++prec) {
        std::ostringstream oss;
        oss.precision(prec);
        oss << v;
        if (std::strtod(oss.str().c_str(), nullptr) == v) return oss.str();
    }
    std::ostringstream oss;
    oss.precision(17);
    oss << v;
    return oss.str();
}

StationNetwork load_network(const std::string& network_path) {
    std::ifstream in = open_or_throw(network_path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(network_path + ": empty file");
    expect_header(line, "station,position_feet", network_path);

    StationNetwork net;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 2 || f[0].empty()) {
            throw DataError(network_path + ":" + std::to_string(line_no) + ": malformed row");
        }
        net.stations.push_back(f[0]);
        net.positions_feet.push_back(parse_real(f[1], network_path, line_no, "position"));
    }
    try {
        net.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(network_path + ": " + e.what());
    }
    return net;
}

std::pair<StationNetwork, StationDataMap>
load_csv(const std::string& data_path, const std::string& network_path) {
    StationNetwork net = load_network(network_path);

    std::ifstream in = open_or_throw(data_path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(data_path + ": empty file");
    expect_header(line, "slot,station,flow,speed", data_path);

    struct Raw {
        std::vector<long> slots;
        std::vector<double> flow;
        std::vector<double> speed;
    };
    std::map<std::string, Raw> raw;

    std::size_t line_no = 1;
    bool any_row = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 4) {
            throw DataError(data_path + ":" + std::to_string(line_no) + ": malformed row");
        }
        const long slot = parse_slot(f[0], data_path, line_no);
        const std::string& station = f[1];
        if (station.empty()) {
            throw DataError(data_path + ":" + std::to_string(line_no) + ": empty station");
        }
        const double flow = parse_real(f[2], data_path, line_no, "flow");
        const double speed = parse_real(f[3], data_path, line_no, "speed");
        if (flow < 0.0 || speed < 0.0) {
            throw DataError(data_path + ":" + std::to_string(line_no) +
                            ": flow and speed must be non-negative");
        }
        Raw& r = raw[station];
        if (!r.slots.empty() && slot <= r.slots.back()) {
            throw DataError(data_path + ":" + std::to_string(line_no) + ": station '" + station +
                            "' slot indices not increasing");
        }
        if (!r.slots.empty() && slot != r.slots.back() + 1) {
            throw DataError(data_path + ":" + std::to_string(line_no) + ": station '" + station +
                            "' has a gap before slot " + std::to_string(slot));
        }
        r.slots.push_back(slot);
        r.flow.push_back(flow);
        r.speed.push_back(speed);
        any_row = true;
    }
    if (!any_row) throw DataError(data_path + ": no data rows");

    for (const auto& [station, r] : raw) {
        (void)r;
        try {
            net.index_of(station);
        } catch (const std::invalid_argument& e) {
            throw DataError(data_path + ": " + e.what());
        }
    }

    StationDataMap out;
    long start = 0;
    std::size_t len = 0;
    bool first = true;
    for (const std::string& station : net.stations) {
        auto it = raw.find(station);
        if (it == raw.end()) {
            throw DataError(data_path + ": no rows for station '" + station + "'");
        }
        const Raw& r = it->second;
        if (first) {
            start = r.slots.front();
            len = r.slots.size();
            first = false;
        } else if (r.slots.front() != start || r.slots.size() != len) {
            throw DataError(data_path + ": station '" + station +
                            "' slot range differs from the other stations");
        }
        StationData sd;
        sd.flow = SlotSeries{station, SeriesKind::flow, 30.0, start, r.flow};
        sd.speed = SlotSeries{station, SeriesKind::speed, 30.0, start, r.speed};
        sd.flow.validate();
        sd.speed.validate();
        out.emplace(station, std::move(sd));
    }
    return {std::move(net), std::move(out)};
}

void save_network(const std::string& network_path, const StationNetwork& network) {
    std::ofstream outf(network_path);
    if (!outf) throw DataError("cannot write '" + network_path + "'");
    outf << "station,position_feet\n";
    for (std::size_t i = 0; i < network.size(); ++i) {
        outf << network.stations[i] << ',' << format_double(network.positions_feet[i]) << '\n';
    }
}

void save_csv(const std::string& data_path, const StationNetwork& network,
              const StationDataMap& data) {
    std::ofstream outf(data_path);
    if (!outf) throw DataError("cannot write '" + data_path + "'");
    outf << "slot,station,flow,speed\n";
    if (data.empty()) return;
    const std::size_t len = data.begin()->second.flow.size();
    const long start = data.begin()->second.flow.start_slot;
    for (std::size_t i = 0; i < len; ++i) {
        for (const std::string& station : network.stations) {
            const StationData& sd = data.at(station);
            outf << (start + static_cast<long>(i)) << ',' << station << ','
                 << format_double(sd.flow.values[i]) << ',' << format_double(sd.speed.values[i])
                 << '\n';
        }
    }
}

void save_value_csv(const std::string& path, const FlowPanel& panel) {
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path + "'");
    outf << "slot,station,value\n";
    outf << "# slot_seconds=" << format_double(panel.slot_seconds) << '\n';
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        for (std::size_t n = 0; n < panel.stations.size(); ++n) {
            outf << (panel.start_slot + t) << ',' << panel.stations[n] << ','
                 << format_double(panel.values(t, static_cast<Eigen::Index>(n))) << '\n';
        }
    }
}

FlowPanel load_value_csv(const std::string& path, const StationNetwork& network) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    expect_header(line, "slot,station,value", path);

    double slot_seconds = 0.0;
    std::map<std::string, std::vector<std::pair<long, double>>> raw;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const auto pos = t.find("slot_seconds=");
            if (pos != std::string::npos) {
                slot_seconds = parse_real(t.substr(pos + 13), path, line_no, "slot_seconds");
            }
            continue;
        }
        const auto f = split_fields(t);
        if (f.size() != 3) throw DataError(path + ":" + std::to_string(line_no) + ": malformed row");
        raw[f[1]].emplace_back(parse_slot(f[0], path, line_no),
                               parse_real(f[2], path, line_no, "value"));
    }
    if (raw.empty()) throw DataError(path + ": no data rows");
    if (!(slot_seconds > 0.0)) throw DataError(path + ": missing slot_seconds annotation");

    FlowPanel panel;
    panel.stations = network.stations;
    panel.slot_seconds = slot_seconds;
    const std::size_t len = raw.begin()->second.size();
    panel.start_slot = raw.begin()->second.front().first;
    panel.values.resize(static_cast<Eigen::Index>(len),
                        static_cast<Eigen::Index>(network.size()));
    for (std::size_t n = 0; n < network.size(); ++n) {
        auto it = raw.find(network.stations[n]);
        if (it == raw.end() || it->second.size() != len) {
            throw DataError(path + ": station '" + network.stations[n] + "' missing or ragged");
        }
        for (std::size_t i = 0; i < len; ++i) {
            if (it->second[i].first != panel.start_slot + static_cast<long>(i)) {
                throw DataError(path + ": station '" + network.stations[n] +
                                "' slots not consecutive");
            }
            panel.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) =
                it->second[i].second;
        }
    }
    return panel;
}

} // namespace starima
