#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "sdkit/ensemble.hpp"

namespace sdkit {

class EnsembleFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Free-form provenance stored in the header line (seed, command, ...).
using EnsembleMeta = std::map<std::string, std::string>;

struct LoadedEnsemble {
  Ensemble ensemble;
  EnsembleMeta meta;
};

// JSON-lines ensemble file (.sdm). Line 1 is the header:
//   {"format":"sdkit-ensemble","version":1,"classes":2,"class_sizes":[5,5],
//    "dataset_checksum":"<16 hex digits>","models":252,"meta":{...}}
// followed by one object per model:
//   {"id":1,"target":[1,2],"captured":[1,4],"subset":{"universe":10,"ids":[3,5,6,8,9]}}
//   {"id":7,"target":[1,2],"captured":[3,0],"region":[[{"kind":"slab","axis":0,"low":2.5,"high":3.5}]]}
// Non-finite reals are written as the strings "inf" / "-inf".

void write_ensemble(std::ostream& out, const Ensemble& ens, const EnsembleMeta& meta = {});
void write_ensemble(const std::filesystem::path& path, const Ensemble& ens, const EnsembleMeta& meta = {});

LoadedEnsemble read_ensemble(std::istream& in);
LoadedEnsemble read_ensemble(const std::filesystem::path& path);

}  // namespace sdkit
