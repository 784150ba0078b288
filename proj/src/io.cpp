#include "hierfdr/io.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace hfdr::io {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& token, const std::string& path) {
    if (token == "NA" || token == "na" || token == "nan" || token == "NaN") {
        return std::nan("");
    }
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
        throw ValidationError("unparseable number '" + token + "' in " + path);
    }
    return v;
}

std::uint64_t parse_count(const std::string& token, const std::string& path) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0') {
        throw ValidationError("unparseable count '" + token + "' in " + path);
    }
    return v;
}

// Leading "# key=value" metadata lines; stops at the first line that is not
// a comment and leaves it in `header`.
std::unordered_map<std::string, std::string> read_metadata(std::ifstream& in,
                                                           std::string& header) {
    std::unordered_map<std::string, std::string> meta;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] != '#') {
            header = line;
            return meta;
        }
        const std::string body = trim(line.substr(1));
        const std::size_t eq = body.find('=');
        if (eq != std::string::npos) {
            meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
        }
    }
    header.clear();
    return meta;
}

struct IdMapper {
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::string> ids;

    std::uint32_t get(const std::string& id) {
        auto it = index.find(id);
        if (it != index.end()) return it->second;
        const auto next = static_cast<std::uint32_t>(ids.size());
        index.emplace(id, next);
        ids.push_back(id);
        return next;
    }
};

std::vector<std::string> default_ids(const char* prefix, std::size_t n) {
    std::vector<std::string> ids(n);
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "%s%zu", prefix, i);
        ids[i] = buf;
    }
    return ids;
}

} // namespace

PValueTable read_pvalue_tsv(const std::string& path) {
    auto in = open_in(path);
    std::string header;
    auto meta = read_metadata(in, header);
    if (header.empty()) throw ValidationError(path + ": missing header line");
    {
        std::istringstream hs(header);
        std::string a, b, c;
        hs >> a >> b >> c;
        if (a != "variant_id" || b != "phenotype_id" || c != "p_value") {
            throw ValidationError(path + ": header must be 'variant_id phenotype_id p_value'");
        }
    }

    IdMapper variants, phenotypes;
    std::vector<PValueEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string vid, tid, pval;
        if (!(ls >> vid >> tid >> pval)) {
            throw ValidationError(path + ": malformed row '" + line + "'");
        }
        entries.push_back({variants.get(vid), phenotypes.get(tid), parse_double(pval, path)});
    }

    std::size_t M = variants.ids.size();
    std::size_t P = phenotypes.ids.size();
    if (auto it = meta.find("n_variants"); it != meta.end()) {
        const std::uint64_t declared = parse_count(it->second, path);
        if (declared < M) throw ValidationError(path + ": more variant ids than n_variants");
        M = declared;
    }
    if (auto it = meta.find("n_phenotypes"); it != meta.end()) {
        const std::uint64_t declared = parse_count(it->second, path);
        if (declared < P) throw ValidationError(path + ": more phenotype ids than n_phenotypes");
        P = declared;
    }
    if (M == 0 || P == 0) throw ValidationError(path + ": no data rows");

    if (auto it = meta.find("save_threshold"); it != meta.end()) {
        const double thr = parse_double(it->second, path);
        return PValueTable{PValueMatrix::build_sparse(M, P, std::move(entries), thr),
                           std::move(variants.ids), std::move(phenotypes.ids)};
    }

    std::vector<double> dense(M * P, std::nan(""));
    std::vector<std::uint8_t> seen(M * P, 0);
    for (const auto& e : entries) {
        const std::size_t cell = static_cast<std::size_t>(e.variant) * P + e.phenotype;
        if (seen[cell]) {
            throw ValidationError(path + ": duplicate cell " + variants.ids[e.variant] +
                                  " / " + phenotypes.ids[e.phenotype]);
        }
        seen[cell] = 1;
        dense[cell] = e.p;
    }
    return PValueTable{PValueMatrix::build_dense(M, P, dense), std::move(variants.ids),
                       std::move(phenotypes.ids)};
}

void write_pvalue_tsv(const std::string& path, const PValueMatrix& matrix,
                      const std::vector<std::string>* variant_ids,
                      const std::vector<std::string>* phenotype_ids) {
    const std::vector<std::string> vdef =
        variant_ids ? std::vector<std::string>{} : default_ids("v", matrix.n_variants());
    const std::vector<std::string> tdef =
        phenotype_ids ? std::vector<std::string>{} : default_ids("t", matrix.n_phenotypes());
    const auto& vids = variant_ids ? *variant_ids : vdef;
    const auto& tids = phenotype_ids ? *phenotype_ids : tdef;
    if (vids.size() != matrix.n_variants() || tids.size() != matrix.n_phenotypes()) {
        throw ValidationError("id vectors do not match the matrix dimensions");
    }

    auto out = open_out(path);
    out << "# n_variants=" << matrix.n_variants() << "\n";
    out << "# n_phenotypes=" << matrix.n_phenotypes() << "\n";
    char buf[64];
    if (matrix.is_sparse()) {
        std::snprintf(buf, sizeof(buf), "%.17g", *matrix.save_threshold());
        out << "# save_threshold=" << buf << "\n";
    }
    out << "variant_id\tphenotype_id\tp_value\n";
    if (!matrix.is_sparse()) {
        for (VariantIndex v = 0; v < matrix.n_variants(); ++v) {
            for (PhenotypeIndex t = 0; t < matrix.n_phenotypes(); ++t) {
                std::snprintf(buf, sizeof(buf), "%.17g", matrix.at(v, t));
                out << vids[v] << '\t' << tids[t] << '\t' << buf << "\n";
            }
        }
    } else {
        auto values = matrix.stored_values();
        auto phen = matrix.stored_phenotypes();
        for (std::size_t k = 0; k < values.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", values[k]);
            out << vids[matrix.stored_variant(k)] << '\t' << tids[phen[k]] << '\t' << buf
                << "\n";
        }
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

NamedMatrix read_matrix_tsv(const std::string& path) {
    auto in = open_in(path);
    std::string header;
    auto meta = read_metadata(in, header);
    (void)meta;
    if (header.empty()) throw ValidationError(path + ": missing header line");

    NamedMatrix m;
    {
        std::istringstream hs(header);
        std::string id;
        while (hs >> id) m.column_ids.push_back(id);
    }
    if (m.column_ids.empty()) throw ValidationError(path + ": empty header");

    std::vector<double> values;
    std::size_t n_rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string token;
        std::size_t count = 0;
        while (ls >> token) {
            values.push_back(parse_double(token, path));
            ++count;
        }
        if (count != m.column_ids.size()) {
            throw ValidationError(path + ": row with wrong column count");
        }
        ++n_rows;
    }
    if (n_rows == 0) throw ValidationError(path + ": no data rows");

    m.data.resize(static_cast<Eigen::Index>(n_rows),
                  static_cast<Eigen::Index>(m.column_ids.size()));
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < m.column_ids.size(); ++c) {
            m.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                values[r * m.column_ids.size() + c];
        }
    }
    return m;
}

void write_matrix_tsv(const std::string& path, const Eigen::MatrixXd& data,
                      const std::vector<std::string>& column_ids) {
    if (static_cast<Eigen::Index>(column_ids.size()) != data.cols()) {
        throw ValidationError("column id count does not match the matrix");
    }
    auto out = open_out(path);
    for (std::size_t c = 0; c < column_ids.size(); ++c) {
        out << (c ? "\t" : "") << column_ids[c];
    }
    out << "\n";
    char buf[64];
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            const double v = data(r, c);
            if (std::isnan(v)) {
                out << (c ? "\tNA" : "NA");
            } else {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out << (c ? "\t" : "") << buf;
            }
        }
        out << "\n";
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

void write_truth_tsv(const std::string& path, const TruthMask& truth) {
    auto out = open_out(path);
    out << "# n_variants=" << truth.n_variants() << "\n";
    out << "# n_phenotypes=" << truth.n_phenotypes() << "\n";
    out << "variant\tphenotype\n";
    for (VariantIndex v = 0; v < truth.n_variants(); ++v) {
        for (PhenotypeIndex t = 0; t < truth.n_phenotypes(); ++t) {
            if (truth.false_null(v, t)) out << v << '\t' << t << "\n";
        }
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

TruthMask read_truth_tsv(const std::string& path) {
    auto in = open_in(path);
    std::string header;
    auto meta = read_metadata(in, header);
    const auto mv = meta.find("n_variants");
    const auto mp = meta.find("n_phenotypes");
    if (mv == meta.end() || mp == meta.end()) {
        throw ValidationError(path + ": truth file needs n_variants and n_phenotypes metadata");
    }
    if (header != "variant\tphenotype" && header != "variant phenotype") {
        throw ValidationError(path + ": header must be 'variant phenotype'");
    }
    TruthMask truth(parse_count(mv->second, path), parse_count(mp->second, path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::uint64_t v, t;
        if (!(ls >> v >> t)) throw ValidationError(path + ": malformed row '" + line + "'");
        if (v >= truth.n_variants() || t >= truth.n_phenotypes()) {
            throw ValidationError(path + ": index out of range in '" + line + "'");
        }
        truth.set_false_null(static_cast<VariantIndex>(v), static_cast<PhenotypeIndex>(t));
    }
    return truth;
}

void write_decisions_tsv(const std::string& path, const DecisionSet& decisions,
                         const std::vector<std::string>* variant_ids,
                         const std::vector<std::string>* phenotype_ids) {
    const std::vector<std::string> vdef =
        variant_ids ? std::vector<std::string>{} : default_ids("v", decisions.n_variants);
    const std::vector<std::string> tdef =
        phenotype_ids ? std::vector<std::string>{} : default_ids("t", decisions.n_phenotypes);
    const auto& vids = variant_ids ? *variant_ids : vdef;
    const auto& tids = phenotype_ids ? *phenotype_ids : tdef;

    auto out = open_out(path);
    out << "# n_variants=" << decisions.n_variants << "\n";
    out << "# n_phenotypes=" << decisions.n_phenotypes << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", decisions.stage2_level);
    out << "# stage2_level=" << buf << "\n";
    out << "# selected=";
    for (std::size_t i = 0; i < decisions.selected_families.size(); ++i) {
        out << (i ? "," : "") << vids[decisions.selected_families[i]];
    }
    out << "\n";
    out << "variant_id\tphenotype_id\n";
    for (const auto& [v, t] : decisions.rejected) {
        out << vids[v] << '\t' << tids[t] << "\n";
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

namespace {

std::vector<std::pair<std::string, std::string>> read_key_values(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(path + ": expected 'key = value' at line " +
                                  std::to_string(line_no));
        }
        pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return pairs;
}

std::vector<double> parse_double_list(const std::string& value, const std::string& path) {
    std::vector<double> out;
    std::istringstream vs(value);
    std::string item;
    while (std::getline(vs, item, ',')) out.push_back(parse_double(trim(item), path));
    if (out.empty()) throw ValidationError(path + ": empty list value");
    return out;
}

std::vector<AssociationBlock> parse_blocks(const std::string& value, const std::string& path) {
    std::vector<AssociationBlock> blocks;
    std::istringstream vs(value);
    std::string item;
    while (std::getline(vs, item, ',')) {
        item = trim(item);
        const std::size_t x = item.find('x');
        if (x == std::string::npos) {
            throw ValidationError(path + ": block '" + item + "' is not NxK");
        }
        AssociationBlock b;
        b.n_variants = parse_count(trim(item.substr(0, x)), path);
        b.n_phenotypes_each = parse_count(trim(item.substr(x + 1)), path);
        blocks.push_back(b);
    }
    return blocks;
}

} // namespace

ScenarioFile read_scenario_file(const std::string& path) {
    const auto pairs = read_key_values(path);
    ScenarioFile file;
    for (const auto& [key, value] : pairs) {
        if (key == "design") {
            if (value == "ld") {
                file.is_ld = true;
            } else if (value != "independent") {
                throw ValidationError(path + ": design must be independent or ld");
            }
        }
    }

    bool saw_m = false, saw_p = false, saw_subjects = false;
    for (const auto& [key, value] : pairs) {
        if (key == "design") continue;
        if (key == "M") {
            file.independent.M = file.ld.M = parse_count(value, path);
            saw_m = true;
        } else if (key == "P") {
            file.independent.P = file.ld.P = parse_count(value, path);
            saw_p = true;
        } else if (key == "blocks") {
            file.independent.blocks = file.ld.blocks = parse_blocks(value, path);
        } else if (key == "grid") {
            file.independent.noise_grid = file.ld.noise_grid = parse_double_list(value, path);
        } else if (key == "replicates") {
            file.independent.replicates = file.ld.replicates = parse_count(value, path);
        } else if (key == "seed") {
            file.independent.base_seed = file.ld.base_seed = parse_count(value, path);
        } else if (key == "mu" && !file.is_ld) {
            file.independent.mu = parse_double(value, path);
        } else if (key == "subjects" && file.is_ld) {
            file.ld.n_subjects = parse_count(value, path);
            saw_subjects = true;
        } else if (key == "beta" && file.is_ld) {
            file.ld.beta = parse_double(value, path);
        } else if (key == "ld_block" && file.is_ld) {
            file.ld.ld_block_size = parse_count(value, path);
        } else if (key == "rho" && file.is_ld) {
            file.ld.rho = parse_double(value, path);
        } else if (key == "maf" && file.is_ld) {
            const auto range = parse_double_list(value, path);
            if (range.size() != 2) throw ValidationError(path + ": maf needs 'lo,hi'");
            file.ld.maf_range = {range[0], range[1]};
        } else if (key == "spacing" && file.is_ld) {
            const std::uint64_t s = parse_count(value, path);
            file.ld.spacing_bp = static_cast<std::int64_t>(s);
        } else if (key == "save_threshold" && file.is_ld) {
            file.ld.save_threshold = parse_double(value, path);
        } else {
            throw ValidationError(path + ": unknown key '" + key + "' for this design");
        }
    }
    if (!saw_m || !saw_p) throw ValidationError(path + ": scenario needs M and P");
    if (file.is_ld) {
        if (!saw_subjects) throw ValidationError(path + ": LD scenario needs subjects");
        file.ld.validate();
    } else {
        file.independent.validate();
    }
    return file;
}

ScenarioSpec read_scenario(const std::string& path) {
    ScenarioFile file = read_scenario_file(path);
    if (file.is_ld) {
        throw ValidationError(path + ": expected an independent-design scenario");
    }
    return file.independent;
}

void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows) {
    auto out = open_out(path);
    out << "sigma,strategy,metric,mean,se\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%g,%s,%s,%.10g,%.10g", r.sigma, r.strategy.c_str(),
                      r.metric.c_str(), r.mean, r.se);
        out << buf << "\n";
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

std::vector<BenchRow> read_bench_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "sigma,strategy,metric,mean,se") {
        throw ValidationError(path + ": unexpected CSV header '" + line + "'");
    }
    std::vector<BenchRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 5) {
            throw ValidationError(path + ": malformed CSV row '" + line + "'");
        }
        BenchRow r;
        r.sigma = parse_double(fields[0], path);
        r.strategy = fields[1];
        r.metric = fields[2];
        r.mean = parse_double(fields[3], path);
        r.se = parse_double(fields[4], path);
        rows.push_back(r);
    }
    return rows;
}

} // namespace hfdr::io
