#pragma once

// Serialization: domain/density CSV, energy-trace CSV, PGM (P2) rendering,
// and configuration CSV. All floating-point output goes through a fixed
// shortest-roundtrip format so reruns are byte-identical.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "energy.hpp"
#include "geometry.hpp"
#include "pointset.hpp"

namespace kemax {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Domain / density CSV
//   line 1: d,p,metric,descriptor
//   line 2: header  x0[,x1],weight[,value]
//   rest:   one node per row
// ---------------------------------------------------------------------------

inline std::string domain_csv(const Domain& dom, const Field* values = nullptr) {
    std::ostringstream out;
    out << dom.intrinsic_dim << ',' << dom.ambient_dim << ',' << metric_name(dom.metric) << ','
        << dom.descriptor << '\n';
    for (int k = 0; k < dom.ambient_dim; ++k) out << 'x' << k << ',';
    out << "weight";
    if (values) out << ",value";
    out << '\n';
    for (std::size_t i = 0; i < dom.node_count(); ++i) {
        for (int k = 0; k < dom.ambient_dim; ++k) out << format_double(dom.node(i)[k]) << ',';
        out << format_double(dom.weights[i]);
        if (values) out << ',' << format_double((*values)[i]);
        out << '\n';
    }
    return out.str();
}

inline void write_domain_csv(const Domain& dom, const std::string& path) {
    write_text_file(path, domain_csv(dom));
}

inline void write_density_csv(const Domain& dom, const Field& values, const std::string& path) {
    write_text_file(path, domain_csv(dom, &values));
}

struct ParsedDensityCsv {
    Domain domain;
    Field values;  // empty when the file has no value column
};

inline ParsedDensityCsv read_domain_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
    ParsedDensityCsv res;
    {
        std::istringstream hdr(line);
        std::string d, p, metric;
        if (!std::getline(hdr, d, ',') || !std::getline(hdr, p, ',') ||
            !std::getline(hdr, metric, ','))
            throw std::runtime_error("malformed header: " + path);
        res.domain.intrinsic_dim = std::stoi(d);
        res.domain.ambient_dim = std::stoi(p);
        if (metric == "euclidean")
            res.domain.metric = Metric::euclidean;
        else if (metric == "manhattan")
            res.domain.metric = Metric::manhattan;
        else
            throw std::runtime_error("unknown metric in: " + path);
        std::getline(hdr, res.domain.descriptor);
    }
    if (!std::getline(in, line)) throw std::runtime_error("missing column header: " + path);
    const bool has_value = line.find(",value") != std::string::npos;
    const int p = res.domain.ambient_dim;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        for (int k = 0; k < p; ++k) {
            if (!std::getline(row, cell, ',')) throw std::runtime_error("short row in: " + path);
            res.domain.coords.push_back(std::stod(cell));
        }
        if (!std::getline(row, cell, ',')) throw std::runtime_error("short row in: " + path);
        res.domain.weights.push_back(std::stod(cell));
        if (has_value) {
            if (!std::getline(row, cell, ',')) throw std::runtime_error("short row in: " + path);
            res.values.push_back(std::stod(cell));
        }
    }
    if (res.domain.weights.empty()) throw std::runtime_error("no nodes in: " + path);
    return res;
}

// ---------------------------------------------------------------------------
// Energy trace CSV: iteration, energy, l1_change (step 0 has no l1 entry)
// ---------------------------------------------------------------------------

inline std::string trace_csv(const std::vector<double>& energies,
                             const std::vector<double>& l1_changes) {
    std::ostringstream out;
    out << "iteration,energy,l1_change\n";
    for (std::size_t s = 0; s < energies.size(); ++s) {
        out << s << ',' << format_double(energies[s]) << ',';
        if (s > 0 && s - 1 < l1_changes.size()) out << format_double(l1_changes[s - 1]);
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// PGM (P2, ASCII): rho_plus renders white (255), rho_minus black-ish (1),
// fractional values gray; pixels outside the domain are 0. Resolution equals
// the domain grid; 1-D domains render as a single row.
// ---------------------------------------------------------------------------

inline std::string density_pgm(const Domain& dom, const DensityField& rho) {
    int nx, ny;
    std::vector<int> pix;
    auto shade = [&](double v) {
        double t = (rho.rho_plus > rho.rho_minus)
                       ? (v - rho.rho_minus) / (rho.rho_plus - rho.rho_minus)
                       : 1.0;
        t = std::min(std::max(t, 0.0), 1.0);
        return 1 + static_cast<int>(std::lround(254.0 * t));
    };
    if (dom.grid.has_value()) {
        const GridInfo& g = *dom.grid;
        nx = g.nx;
        ny = g.ny;
        pix.assign(static_cast<std::size_t>(nx) * ny, 0);
        for (std::size_t k = 0; k < dom.node_count(); ++k) {
            // PGM rows run top to bottom; grid rows bottom to top
            const std::size_t row = static_cast<std::size_t>(ny - 1 - g.iy[k]);
            pix[row * nx + g.ix[k]] = shade(rho.values[k]);
        }
    } else {
        nx = static_cast<int>(dom.node_count());
        ny = 1;
        pix.resize(dom.node_count());
        for (std::size_t k = 0; k < dom.node_count(); ++k) pix[k] = shade(rho.values[k]);
    }
    std::ostringstream out;
    out << "P2\n" << nx << ' ' << ny << "\n255\n";
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (i) out << ' ';
            out << pix[static_cast<std::size_t>(j) * nx + i];
        }
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Configuration CSV: one point per row
// ---------------------------------------------------------------------------

inline std::string configuration_csv(const Configuration& X) {
    std::ostringstream out;
    for (int k = 0; k < X.ambient_dim; ++k) {
        if (k) out << ',';
        out << 'x' << k;
    }
    out << '\n';
    for (std::size_t i = 0; i < X.n(); ++i) {
        for (int k = 0; k < X.ambient_dim; ++k) {
            if (k) out << ',';
            out << format_double(X.point(i)[k]);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace kemax
