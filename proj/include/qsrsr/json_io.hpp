#pragma once

#include <json.hpp>
#include <string>
#include <variant>

#include "qsrsr/recovery.hpp"

namespace qsrsr {

// Data sets: {"blocks":[2,3],"points":[["1","2","4","5","7"],...]} with one
// inner list per point; entries are exact rational strings ("p/q" or
// decimal).
PartitionedDataSet data_from_json(const nlohmann::json& j);

// CSV alternative: one row per point; block sizes come from the caller.
PartitionedDataSet data_from_csv(const std::string& text, const std::vector<int>& blocks);

// Quiver datums:
// {"vertices":[{"id":"x1","weight":5,"dim":1},...],
//  "arrows":[{"id":"a11","tail":"x1","head":"y1","matrix":[["1","2"],...]},...]}
QuiverDatum datum_from_json(const nlohmann::json& j);

using AnyInput = std::variant<PartitionedDataSet, QuiverDatum>;

// Dispatches on the JSON shape: "points" => data set, "vertices" => datum.
AnyInput input_from_json(const nlohmann::json& j);
AnyInput load_input_file(const std::string& path, const std::vector<int>& csv_blocks = {});

nlohmann::json to_json(const SubspaceBasis& s);
nlohmann::json to_json(const SubspaceTuple& t);
nlohmann::json to_json(const Subrepresentation& w, const Quiver* quiver = nullptr);
nlohmann::json to_json(const ScalingTrace& t);
nlohmann::json to_json(const CertificateInfo& c);
nlohmann::json to_json(const OracleResult& o);
nlohmann::json report_to_json(const RecoveryReport& r);

}  // namespace qsrsr
