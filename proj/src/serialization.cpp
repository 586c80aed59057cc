#include "aniso/serialization.hpp"

#include <fstream>

namespace aniso {

namespace {

Eigen::VectorXd vector_from_json(const Json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

Json vector_to_json(const Eigen::VectorXd& v) {
    Json j = Json::array();
    for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) != cols) {
            throw Error("matrix: ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
        }
    }
    return m;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json j = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
        j.push_back(std::move(row));
    }
    return j;
}

MatQ matrix_q_from_json(const Json& j) {
    const int rows = static_cast<int>(j.size());
    const int cols = rows > 0 ? static_cast<int>(j[0].size()) : 0;
    MatQ m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < cols; ++c) {
            m(i, c) = parse_fraction(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<std::string>());
        }
    return m;
}

Json matrix_q_to_json(const MatQ& m) {
    Json j = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(to_fraction_string(m(i, c)));
        j.push_back(std::move(row));
    }
    return j;
}

}  // namespace

Json to_json(const KVector& v) {
    Json coeffs = Json::array();
    for (double c : v.coeffs()) coeffs.push_back(c);
    return Json{{"n", v.n()}, {"k", v.grade()}, {"coeffs", std::move(coeffs)}};
}

Json to_json(const KVectorQ& v) {
    Json coeffs = Json::array();
    for (const Rational& c : v.coeffs()) coeffs.push_back(to_fraction_string(c));
    return Json{{"n", v.n()}, {"k", v.grade()}, {"coeffs", std::move(coeffs)}};
}

bool is_rational_kvector(const Json& j) {
    const auto& coeffs = j.at("coeffs");
    return !coeffs.empty() && coeffs[0].is_string();
}

KVector kvector_from_json(const Json& j) {
    int n = j.at("n").get<int>();
    int k = j.at("k").get<int>();
    std::vector<double> coeffs;
    for (const auto& c : j.at("coeffs")) {
        if (c.is_string()) {
            coeffs.push_back(to_double(parse_fraction(c.get<std::string>())));
        } else {
            coeffs.push_back(c.get<double>());
        }
    }
    return KVector(n, k, std::move(coeffs));
}

KVectorQ kvector_q_from_json(const Json& j) {
    int n = j.at("n").get<int>();
    int k = j.at("k").get<int>();
    std::vector<Rational> coeffs;
    for (const auto& c : j.at("coeffs")) {
        if (c.is_string()) {
            coeffs.push_back(parse_fraction(c.get<std::string>()));
        } else {
            coeffs.push_back(rational_of(c.get<double>()));
        }
    }
    return KVectorQ(n, k, std::move(coeffs));
}

Json to_json_spec(const GeometricIntegrand& psi) {
    return Json{{"name", psi.name()}, {"params", Json{{"n", psi.n()}, {"k", psi.k()}}}};
}

GeometricIntegrand integrand_from_json(const Json& j) {
    std::string name = j.at("name").get<std::string>();
    const Json& params = j.value("params", Json::object());
    int n = params.at("n").get<int>();
    int k = params.at("k").get<int>();
    auto with_claim = [&](GeometricIntegrand psi) {
        if (params.contains("claimed_lipschitz")) {
            return psi.with_claimed_lipschitz(params.at("claimed_lipschitz").get<double>());
        }
        return psi;
    };
    if (name == "area") return with_claim(make_area(n, k));
    if (name == "ellipse_norm") {
        Eigen::MatrixXd a;
        if (params.contains("diag")) {
            Eigen::VectorXd d = vector_from_json(params.at("diag"));
            a = d.asDiagonal();
        } else {
            a = matrix_from_json(params.at("A"));
        }
        return with_claim(make_ellipse_norm(n, k, a));
    }
    if (name == "perturbed_area") {
        KVector eta_star = kvector_from_json(params.at("eta_star"));
        double eps = params.at("eps").get<double>();
        return with_claim(make_perturbed_area(n, k, eta_star, eps));
    }
    if (name == "tabulated") {
        std::vector<std::pair<KVector, double>> samples;
        for (const auto& s : params.at("samples")) {
            samples.emplace_back(kvector_from_json(s.at("kvector")), s.at("value").get<double>());
        }
        return with_claim(make_tabulated(n, k, samples));
    }
    throw Error("integrand_from_json: unknown integrand '" + name + "'");
}

Json to_json(const Decomposition& dec) {
    Json atoms = Json::array();
    for (const auto& [m, eta] : dec.atoms) {
        atoms.push_back(Json{{"m", m}, {"eta", to_json(eta.kvector())}});
    }
    return Json{{"eta0", to_json(dec.eta0.kvector())}, {"atoms", std::move(atoms)}};
}

Decomposition decomposition_from_json(const Json& j) {
    Decomposition dec;
    dec.eta0 = OrientedPlane::from_kvector(kvector_from_json(j.at("eta0")));
    for (const auto& atom : j.at("atoms")) {
        dec.atoms.emplace_back(atom.at("m").get<double>(),
                               OrientedPlane::from_kvector(kvector_from_json(atom.at("eta"))));
    }
    validate(dec);
    return dec;
}

Json to_json(const PolyhedralChain& chain) {
    Json cells = Json::array();
    for (const auto& [cell, mult] : chain.cells()) {
        Json verts = Json::array();
        for (const auto& v : cell.vertices) verts.push_back(vector_to_json(v));
        cells.push_back(Json{{"vertices", std::move(verts)}, {"multiplicity", mult}});
    }
    return Json{{"n", chain.n()}, {"k", chain.k()}, {"cells", std::move(cells)}};
}

PolyhedralChain chain_from_json(const Json& j) {
    PolyhedralChain chain(j.at("n").get<int>(), j.at("k").get<int>());
    for (const auto& cj : j.at("cells")) {
        Cell cell;
        for (const auto& vj : cj.at("vertices")) cell.vertices.push_back(vector_from_json(vj));
        chain.add(std::move(cell), cj.at("multiplicity").get<double>());
    }
    return chain;
}

Json to_json(const QFunction& f) {
    Json cells = Json::array();
    for (const auto& cell_sheets : f.sheets) {
        Json sheets = Json::array();
        for (const auto& sheet : cell_sheets) {
            sheets.push_back(Json{{"a", vector_to_json(sheet.a)}, {"L", matrix_to_json(sheet.l)}});
        }
        cells.push_back(Json{{"sheets", std::move(sheets)}});
    }
    return Json{{"k", f.k}, {"m", f.m}, {"Q", f.q}, {"level", f.level}, {"cells", std::move(cells)}};
}

QFunction qfunction_from_json(const Json& j) {
    QFunction f;
    f.k = j.at("k").get<int>();
    f.m = j.at("m").get<int>();
    f.q = j.at("Q").get<int>();
    f.level = j.at("level").get<int>();
    for (const auto& cj : j.at("cells")) {
        std::vector<AffineSheet> sheets;
        for (const auto& sj : cj.at("sheets")) {
            sheets.push_back({vector_from_json(sj.at("a")), matrix_from_json(sj.at("L"))});
        }
        f.sheets.push_back(std::move(sheets));
    }
    if (f.sheets.size() != f.complex().cell_count()) {
        throw Error("qfunction_from_json: cell count does not match the subdivision");
    }
    return f;
}

Json to_json(const AffineMultigraph& h) {
    Json groups = Json::array();
    for (const auto& g : h.groups) {
        groups.push_back(
            Json{{"count", g.count}, {"a", vector_to_json(g.a)}, {"L", matrix_to_json(g.l)}});
    }
    return Json{{"k", h.k}, {"m", h.m}, {"Q", h.q()}, {"groups", std::move(groups)}};
}

AffineMultigraph multigraph_from_json(const Json& j) {
    AffineMultigraph h;
    h.k = j.at("k").get<int>();
    h.m = j.at("m").get<int>();
    for (const auto& gj : j.at("groups")) {
        AffineMultigraph::Group g;
        g.count = gj.at("count").get<int>();
        g.a = vector_from_json(gj.at("a"));
        g.l = matrix_from_json(gj.at("L"));
        h.groups.push_back(std::move(g));
    }
    h.validate();
    return h;
}

Json to_json(const RationalSimpleKVector& v) {
    return Json{{"frame", matrix_q_to_json(v.frame)}, {"kvector", to_json(v.kvector)}};
}

RationalSimpleKVector rational_simple_from_json(const Json& j) {
    RationalSimpleKVector v;
    v.frame = matrix_q_from_json(j.at("frame"));
    v.kvector = kvector_q_from_json(j.at("kvector"));
    if (!(v.kvector == wedge_cols(v.frame))) {
        throw Error("rational_simple_from_json: kvector does not match the frame");
    }
    return v;
}

Json to_json(const RationalDecomposition& rd) {
    Json atoms = Json::array();
    for (const auto& atom : rd.atoms) {
        atoms.push_back(
            Json{{"m", to_fraction_string(atom.weight)}, {"eta_tilde", to_json(atom.plane)}});
    }
    Json bounds{{"eps", rd.cert.eps},
                {"eta0_raw_dist", rd.cert.eta0_raw_dist},
                {"eta0_unit_dist", rd.cert.eta0_unit_dist},
                {"eta0_bound", rd.cert.eta0_bound},
                {"atom_dist", rd.cert.atom_dist},
                {"atom_bound", rd.cert.atom_bound},
                {"d", rd.cert.d},
                {"extra_atoms", rd.cert.extra_atoms},
                {"max_extra", rd.cert.max_extra},
                {"positivity_ok", rd.cert.positivity_ok},
                {"exact_identity", rd.cert.exact_identity},
                {"all_bounds_hold", rd.cert.ok()}};
    return Json{{"eta0_tilde", to_json(rd.eta0)},
                {"atoms", std::move(atoms)},
                {"d_original", rd.d_original},
                {"N", rd.count()},
                {"bounds", std::move(bounds)}};
}

RationalDecomposition rational_decomposition_from_json(const Json& j) {
    RationalDecomposition rd;
    rd.eta0 = rational_simple_from_json(j.at("eta0_tilde"));
    rd.d_original = j.at("d_original").get<int>();
    for (const auto& atom : j.at("atoms")) {
        rd.atoms.push_back({parse_fraction(atom.at("m").get<std::string>()),
                            rational_simple_from_json(atom.at("eta_tilde"))});
    }
    const Json& bounds = j.at("bounds");
    rd.cert.eps = bounds.at("eps").get<double>();
    rd.cert.eta0_raw_dist = bounds.at("eta0_raw_dist").get<double>();
    rd.cert.eta0_unit_dist = bounds.at("eta0_unit_dist").get<double>();
    rd.cert.eta0_bound = bounds.at("eta0_bound").get<double>();
    rd.cert.atom_dist = bounds.at("atom_dist").get<std::vector<double>>();
    rd.cert.atom_bound = bounds.at("atom_bound").get<std::vector<double>>();
    rd.cert.d = bounds.at("d").get<int>();
    rd.cert.extra_atoms = bounds.at("extra_atoms").get<int>();
    rd.cert.max_extra = bounds.at("max_extra").get<int>();
    rd.cert.positivity_ok = bounds.at("positivity_ok").get<bool>();
    rd.cert.exact_identity = bounds.at("exact_identity").get<bool>();
    return rd;
}

Json to_json(const UpcReport& report) {
    Json j{{"mode", to_string(report.mode)},
           {"c", report.c},
           {"worst_gap", report.worst_gap},
           {"inequality", "sum_i m_i Psi(eta_i) - Psi(eta_0) >= c (sum_i m_i |eta_i| - |eta_0|)"},
           {"caveat", report.caveat},
           {"sample_stats",
            Json{{"n_dirs", report.stats.n_dirs},
                 {"n_atoms", report.stats.n_atoms},
                 {"seed", report.stats.seed},
                 {"orientation_mode", to_string(report.stats.mode)},
                 {"max_lp_support", report.stats.max_support},
                 {"lp_iterations", report.stats.lp_iterations}}}};
    if (report.witness) {
        j["witness"] = to_json(*report.witness);
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw Error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace aniso
