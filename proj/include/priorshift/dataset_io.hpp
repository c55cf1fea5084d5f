#pragma once

#include <string>

#include "priorshift/dataset.hpp"

namespace priorshift {

// Dataset CSV: header `x0,...,x{m-1},y,z`, one sample per row, with a
// `<path minus .csv>.meta.json` sidecar holding
// {m, num_classes, num_attributes, domain_tag}. Features are rendered with 17
// significant digits so save/load round-trips bit-exactly.
void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

// Weight CSV: header `index,weight`.
void save_weights(const WeightVector& w, const std::string& path);
WeightVector load_weights(const std::string& path);

std::string meta_path_for(const std::string& csv_path);

}  // namespace priorshift
