#pragma once

#include <string>
#include <vector>

#include "drselect/dataset.hpp"

namespace drselect {

// Strict numeric CSV: one header row, comma separator, '.' decimal point,
// no quoting, no missing cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

// Builds a Dataset from named columns. An empty covariate list means
// "all columns except outcome and treatment". The treatment column must
// hold exact 0/1 values.
Dataset dataset_from_csv(const CsvTable& table, const std::string& outcome,
                         const std::string& treatment,
                         const std::vector<std::string>& covariates = {});

void write_dataset_csv(const Dataset& data, const std::string& path);

}  // namespace drselect
