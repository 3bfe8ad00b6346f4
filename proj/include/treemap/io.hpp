#pragma once

#include <string>
#include <string_view>

#include "treemap/baseline.hpp"
#include "treemap/geometry.hpp"

namespace treemap {

/// Layout JSON: {"algorithm", "timestep", "bounds": [x, y, w, h],
/// "cells": [{"id", "x", "y", "w", "h"}], "groups": [...]}.
std::string layout_to_json(const Layout& layout, std::string_view algorithm, int timestep);

/// Reads cells (and bounds) back against a known hierarchy; groups are
/// rebuilt rather than read. Throws DatasetError on unknown ids.
Layout layout_from_json(std::string_view text, std::shared_ptr<const Hierarchy> hierarchy);

/// Layout JSON of the baseline plus "walls", "deleted", "inserted",
/// "converged", "max_rel_area_error" and "iterations".
std::string baseline_to_json(const BaselineResult& result, int from_timestep, int to_timestep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace treemap
