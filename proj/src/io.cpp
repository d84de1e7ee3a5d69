#include "bguard/io.hpp"

#include <nlohmann/json.hpp>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace bguard::io {
namespace {

json matrix_to_json(const MatrixXd& M) {
    std::vector<double> flat(M.size());
    for (int r = 0; r < M.rows(); ++r)
        for (int c = 0; c < M.cols(); ++c) flat[r * M.cols() + c] = M(r, c);
    return flat;
}

MatrixXd matrix_from_json(const json& j, int rows, int cols) {
    const auto flat = j.get<std::vector<double>>();
    if (static_cast<int>(flat.size()) != rows * cols)
        throw ContractViolation("matrix_from_json: size mismatch");
    MatrixXd M(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) M(r, c) = flat[r * cols + c];
    return M;
}

}  // namespace

json to_json(const SystemSpec& sys) {
    return json{{"n", sys.n()},
                {"m", sys.m()},
                {"p", sys.p()},
                {"a", matrix_to_json(sys.A)},
                {"b", matrix_to_json(sys.B)},
                {"c", matrix_to_json(sys.C)},
                {"time_kind", sys.time_kind == TimeKind::continuous ? "continuous" : "discrete"},
                {"ts", sys.ts}};
}

SystemSpec system_from_json(const json& j) {
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const int p = j.at("p").get<int>();
    const std::string kind = j.at("time_kind").get<std::string>();
    if (kind != "continuous" && kind != "discrete")
        throw ContractViolation("system_from_json: unknown time_kind");
    return SystemSpec(matrix_from_json(j.at("a"), n, n), matrix_from_json(j.at("b"), n, m),
                      matrix_from_json(j.at("c"), p, n),
                      kind == "continuous" ? TimeKind::continuous : TimeKind::discrete,
                      j.value("ts", 0.0));
}

json to_json(const GpeReport& rep) {
    return json{{"holds", rep.holds},
                {"rank", rep.rank},
                {"target", rep.target},
                {"gap_ratio", std::isfinite(rep.gap_ratio) ? json(rep.gap_ratio) : json("inf")}};
}

json to_json(const Certificate& cert) {
    static const char* names[] = {"cond1", "cond2", "cond3", "t_norm", "epigraph"};
    json j{{"condition", names[static_cast<int>(cert.condition)]},
           {"holds", cert.holds()},
           {"status", cert.status == CertStatus::holds        ? "holds"
                      : cert.status == CertStatus::fails      ? "fails"
                                                              : "indeterminate"},
           {"budget_used", cert.budget_used}};
    if (cert.k >= 0) j["k"] = cert.k;
    if (cert.witness) j["witness_indices"] = cert.witness->indices;
    if (cert.condition == ConditionId::t_norm) j["norm"] = cert.norm;
    if (cert.condition == ConditionId::epigraph) j["optimum"] = cert.optimum;
    return j;
}

json to_json(const AttackRecord& rec) {
    return json{{"kind", attack_kind_name(rec.kind)},
                {"k", rec.k},
                {"support", rec.support.indices},
                {"support_universe", rec.support.universe},
                {"magnitude", rec.magnitude},
                {"seed", rec.seed},
                {"q", rec.w.q},
                {"length", rec.w.length()},
                {"w", matrix_to_json(rec.w.samples)}};
}

AttackRecord attack_from_json(const json& j) {
    AttackRecord rec;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "entry" && kind != "channel")
        throw ContractViolation("attack_from_json: unknown kind");
    rec.kind = (kind == "entry") ? AttackKind::entry : AttackKind::channel;
    rec.k = j.at("k").get<int>();
    rec.magnitude = j.at("magnitude").get<double>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    const int q = j.at("q").get<int>();
    const int length = j.at("length").get<int>();
    rec.w = Trajectory(q, matrix_from_json(j.at("w"), q, length));
    rec.support = IndexSet(j.at("support").get<std::vector<int>>(),
                           j.at("support_universe").get<int>());
    return rec;
}

json to_json(const RecoveryResult& res) {
    json j{{"status", status_name(res.status)},
           {"residual", res.residual},
           {"subproblems_tried", res.subproblems_tried},
           {"wall_time_s", res.wall_time_s}};
    if (res.k_used >= 0) j["k_used"] = res.k_used;
    if (res.status == RecoveryStatus::recovered) {
        j["q"] = res.w_tilde.q;
        j["length"] = res.w_tilde.length();
        j["w_tilde"] = matrix_to_json(res.w_tilde.samples);
        j["g"] = std::vector<double>(res.g.data(), res.g.data() + res.g.size());
        j["selected"] = res.selected.indices;
    }
    if (res.per_entry_residuals.size())
        j["per_entry_residuals"] = std::vector<double>(
            res.per_entry_residuals.data(),
            res.per_entry_residuals.data() + res.per_entry_residuals.size());
    if (res.group_norms.size())
        j["group_norms"] = std::vector<double>(res.group_norms.data(),
                                               res.group_norms.data() + res.group_norms.size());
    return j;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& w, int m) {
    if (m < 0 || m > w.q) throw ContractViolation("write_trajectory_csv: bad input count");
    for (int i = 1; i <= m; ++i) os << (i > 1 ? "," : "") << "u_" << i;
    for (int i = 1; i <= w.q - m; ++i) os << (m > 0 || i > 1 ? "," : "") << "y_" << i;
    os << "\n";
    os.precision(17);
    for (int t = 0; t < w.length(); ++t) {
        for (int r = 0; r < w.q; ++r) os << (r > 0 ? "," : "") << w.samples(r, t);
        os << "\n";
    }
}

Trajectory read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw ContractViolation("read_trajectory_csv: missing header row");
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ContractViolation("read_trajectory_csv: parse error at line " +
                                        std::to_string(lineno) + ", column " + std::to_string(col));
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ContractViolation("read_trajectory_csv: ragged row at line " +
                                    std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ContractViolation("read_trajectory_csv: no data rows");
    const int q = static_cast<int>(rows.front().size());
    MatrixXd samples(q, rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (int r = 0; r < q; ++r) samples(r, static_cast<int>(t)) = rows[t][r];
    return Trajectory(q, std::move(samples));
}

void write_matrix_csv(std::ostream& os, const MatrixXd& M) {
    os.precision(17);
    for (int r = 0; r < M.rows(); ++r) {
        for (int c = 0; c < M.cols(); ++c) os << (c > 0 ? "," : "") << M(r, c);
        os << "\n";
    }
}

std::string attack_kind_name(AttackKind kind) {
    return kind == AttackKind::entry ? "entry" : "channel";
}

std::string status_name(RecoveryStatus status) {
    switch (status) {
        case RecoveryStatus::recovered: return "recovered";
        case RecoveryStatus::no_solution: return "no_solution";
        default: return "budget_exceeded";
    }
}

}  // namespace bguard::io
