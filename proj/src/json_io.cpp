#include "qsrsr/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qsrsr {

using nlohmann::json;

namespace {

Rational cell(const json& j, const char* context) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return make_rational(j.get<long long>());
  throw ParseError(std::string(context) + ": entries must be rational strings or integers");
}

}  // namespace

PartitionedDataSet data_from_json(const json& j) {
  if (!j.contains("blocks") || !j.contains("points"))
    throw ParseError("data set JSON needs \"blocks\" and \"points\"");
  PartitionedDataSet x;
  for (const auto& b : j.at("blocks")) x.blocks.push_back(b.get<int>());
  x.m = static_cast<int>(x.blocks.size());
  const auto& pts = j.at("points");
  x.n = static_cast<int>(pts.size());
  const int d_total = x.dimension();
  x.points = RationalMatrix(static_cast<std::size_t>(d_total), static_cast<std::size_t>(x.n));
  for (int i = 0; i < x.n; ++i) {
    const auto& p = pts.at(static_cast<std::size_t>(i));
    if (static_cast<int>(p.size()) != d_total) {
      std::ostringstream os;
      os << "point " << i << " has " << p.size() << " coordinates, expected " << d_total;
      throw ParseError(os.str());
    }
    for (int t = 0; t < d_total; ++t)
      x.points.at(static_cast<std::size_t>(t), static_cast<std::size_t>(i)) =
          cell(p.at(static_cast<std::size_t>(t)), "points");
  }
  if (auto violations = x.validate(); !violations.empty())
    throw ParseError("invalid data set: " + violations.front().what);
  return x;
}

PartitionedDataSet data_from_csv(const std::string& text, const std::vector<int>& blocks) {
  if (blocks.empty()) throw ParseError("CSV input needs --blocks d1,d2,...");
  std::vector<std::vector<Rational>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<Rational> row;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) row.push_back(parse_rational(field));
    rows.push_back(std::move(row));
  }
  PartitionedDataSet x;
  x.blocks = blocks;
  x.m = static_cast<int>(blocks.size());
  x.n = static_cast<int>(rows.size());
  const int d_total = x.dimension();
  x.points = RationalMatrix(static_cast<std::size_t>(d_total), static_cast<std::size_t>(x.n));
  for (int i = 0; i < x.n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != d_total) {
      std::ostringstream os;
      os << "CSV row " << i << " has " << rows[static_cast<std::size_t>(i)].size()
         << " fields, expected " << d_total;
      throw ParseError(os.str());
    }
    for (int t = 0; t < d_total; ++t)
      x.points.at(static_cast<std::size_t>(t), static_cast<std::size_t>(i)) =
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
  }
  if (auto violations = x.validate(); !violations.empty())
    throw ParseError("invalid data set: " + violations.front().what);
  return x;
}

QuiverDatum datum_from_json(const json& j) {
  if (!j.contains("vertices") || !j.contains("arrows"))
    throw ParseError("quiver datum JSON needs \"vertices\" and \"arrows\"");
  QuiverDatum datum;
  for (const auto& v : j.at("vertices")) {
    datum.quiver.add_vertex(v.at("id").get<std::string>());
    datum.weight.push_back(v.at("weight").get<long long>());
    datum.rep.dim.push_back(v.at("dim").get<int>());
  }
  for (const auto& a : j.at("arrows")) {
    const std::string tail = a.at("tail").get<std::string>();
    const std::string head = a.at("head").get<std::string>();
    const int ti = datum.quiver.vertex_index(tail);
    const int hi = datum.quiver.vertex_index(head);
    if (ti < 0 || hi < 0)
      throw ParseError("arrow references unknown vertex: " + tail + " -> " + head);
    std::string id = a.contains("id") ? a.at("id").get<std::string>()
                                      : tail + "->" + head;
    datum.quiver.add_arrow(id, ti, hi);
    const auto& rows = a.at("matrix");
    const std::size_t nr = rows.size();
    const std::size_t nc = nr == 0 ? 0 : rows.at(0).size();
    RationalMatrix m(nr, nc);
    for (std::size_t r = 0; r < nr; ++r) {
      if (rows.at(r).size() != nc) throw ParseError("ragged matrix on arrow " + id);
      for (std::size_t c = 0; c < nc; ++c) m.at(r, c) = cell(rows.at(r).at(c), "matrix");
    }
    datum.rep.arrow_matrix.push_back(std::move(m));
  }
  if (auto violations = validate(datum); !violations.empty())
    throw ParseError("invalid quiver datum: " + violations.front().what + " (" +
                     violations.front().where + ")");
  return datum;
}

AnyInput input_from_json(const json& j) {
  if (j.contains("points")) return data_from_json(j);
  if (j.contains("vertices")) return datum_from_json(j);
  throw ParseError("unrecognized input: expected a data set (\"points\") or a quiver datum "
                   "(\"vertices\")");
}

AnyInput load_input_file(const std::string& path, const std::vector<int>& csv_blocks) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return data_from_csv(text, csv_blocks);
  json j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  if (j.contains("points") && !csv_blocks.empty())
    throw ParseError("--blocks applies to CSV input only");
  return input_from_json(j);
}

json to_json(const SubspaceBasis& s) {
  json cols = json::array();
  for (std::size_t c = 0; c < s.dim(); ++c) {
    json col = json::array();
    for (std::size_t r = 0; r < s.ambient(); ++r) col.push_back(format_rational(s.basis().at(r, c)));
    cols.push_back(col);
  }
  return json{{"ambient", s.ambient()}, {"dim", s.dim()}, {"basis_columns", cols}};
}

json to_json(const SubspaceTuple& t) {
  json out = json::array();
  for (const auto& tj : t.t) out.push_back(to_json(tj));
  return out;
}

json to_json(const Subrepresentation& w, const Quiver* quiver) {
  json spaces = json::array();
  for (std::size_t v = 0; v < w.space.size(); ++v) {
    json entry = to_json(w.space[v]);
    if (quiver) entry["vertex"] = quiver->vertex_ids[v];
    spaces.push_back(entry);
  }
  return json{{"dims", w.dims()}, {"spaces", spaces}};
}

json to_json(const ScalingTrace& t) {
  return json{{"verdict", to_string(t.verdict)},
              {"reason", to_string(t.reason)},
              {"iterations_used", t.iterations_used},
              {"ds_history", t.ds_history},
              {"ds_threshold", t.threshold},
              {"default_budget", t.default_budget},
              {"effective_budget", t.effective_budget},
              {"m_magnitude", t.m_magnitude},
              {"n_dim", t.n_dim},
              {"budget_log_base", "natural"},
              {"exact_precheck", t.exact_precheck_used},
              {"singular_mid_run", t.singular_mid_run}};
}

json to_json(const CertificateInfo& c) {
  return json{{"seed", c.seed},
              {"sample_bound", c.sample_bound},
              {"attempts", c.attempts},
              {"alpha", c.alpha},
              {"wong_dims", c.wong_dims},
              {"ranks",
               {{"rank_b", c.rank_b},
                {"corank_b", c.corank_b},
                {"rank_y", c.rank_y},
                {"rank_ty", c.rank_ty}}}};
}

json to_json(const OracleResult& o) {
  return json{{"disc", o.disc},
              {"best_subset", o.best_subset},
              {"best_index_set", o.best_index_set},
              {"best_tuple", to_json(o.best_tuple)}};
}

json report_to_json(const RecoveryReport& r) {
  json out;
  out["schema"] = "qsrsr/1";
  out["verdict"] = to_string(r.verdict);
  out["method"] = to_string(r.method);
  out["pairing_value"] = r.pairing_value;
  out["margin"] = format_rational(r.margin);
  out["discrepancy"] = json{{"value", r.discrepancy}, {"exact", r.discrepancy_exact}};
  if (r.solution_index_set) out["index_set"] = *r.solution_index_set;
  if (r.solution_tuple) out["solution"] = to_json(*r.solution_tuple);
  if (r.solution_subrep) out["subrepresentation"] = to_json(*r.solution_subrep);
  if (r.certificate) out["certificate"] = to_json(*r.certificate);
  if (r.scaling) out["scaling"] = to_json(*r.scaling);
  out["flags"] = json{{"scaling_disagreed", r.scaling_disagreed},
                      {"verdict_heuristic", r.verdict_heuristic},
                      {"bipartized", r.bipartized},
                      {"zero_weight_vertices", r.zero_weight_vertices}};
  out["config"] = json{{"epsilon", format_rational(r.options.epsilon)},
                       {"seed", r.options.seed},
                       {"max_retries", r.options.max_retries},
                       {"scaling_screen", r.options.run_scaling_screen},
                       {"screen_max_iters", r.options.screen_max_iters},
                       {"exact_precheck", r.options.exact_precheck},
                       {"oracle_max_n", r.options.oracle_max_n}};
  if (!r.notes.empty()) out["notes"] = r.notes;
  out["timings"] = json{{"elapsed_seconds", r.elapsed_seconds}};
  return out;
}

}  // namespace qsrsr
