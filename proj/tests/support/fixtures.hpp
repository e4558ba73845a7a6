#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include "lego/system_data.hpp"
#include "lego/temporal.hpp"

namespace lego::testing {

inline std::filesystem::path data_dir() { return LEGO_TEST_DATA_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("lego_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Two buses joined by one line, one thermal candidate at the slack, demand
/// at the other bus, one rp of `steps` steps.
SystemData two_bus_system(int steps = 2);

}  // namespace lego::testing
