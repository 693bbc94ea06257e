#pragma once

#include "starima/isodata.hpp"
#include "starima/starima.hpp"
#include "starima/synth.hpp"

#include <string>

namespace starima {

// JSON documents; numeric fields survive a save/load cycle bit-exactly.
void save_model(const std::string& path, const StarimaModel& model);
StarimaModel load_model(const std::string& path);

void save_clusters(const std::string& path, const SpeedClusterSet& clusters);
SpeedClusterSet load_clusters(const std::string& path);

void save_ground_truth(const std::string& path, const GroundTruth& truth);
GroundTruth load_ground_truth(const std::string& path);

} // namespace starima
