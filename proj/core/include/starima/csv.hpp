#ifndef STARIMA_CSV_HPP
#define STARIMA_CSV_HPP

#include "starima/series.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace starima {

struct StationData {
    SlotSeries flow;
    SlotSeries speed;
};

using StationDataMap = std::map<std::string, StationData>;

// Reads the detector data file (header `slot,station,flow,speed`) together
// with the network file (header `station,position_feet`, ordered along the
// travel direction). Per station, slots must be consecutive and every network
// station must appear; a gap or an unknown station is a hard DataError.
std::pair<StationNetwork, StationDataMap>
load_csv(const std::string& data_path, const std::string& network_path);

void save_csv(const std::string& data_path, const StationNetwork& network,
              const StationDataMap& data);
void save_network(const std::string& network_path, const StationNetwork& network);
StationNetwork load_network(const std::string& network_path);

// Single-value per-station artifact files (header `slot,station,value`),
// used for smoothed series between pipeline stages.
void save_value_csv(const std::string& path, const FlowPanel& panel);
FlowPanel load_value_csv(const std::string& path, const StationNetwork& network);

// Shortest round-trip representation, so re-serialized files are canonical.
std::string format_double(double v);

} // namespace starima

#endif
