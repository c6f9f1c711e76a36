#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptrdm/tensor.hpp"

namespace adaptrdm {

/// One-/two-electron integrals over spatial orbitals, as read from an FCIDUMP
/// file (Molpro convention, chemists' (ij|kl) ordering, real orbitals).
struct MolecularIntegrals {
    std::size_t n_spatial = 0;
    std::size_t n_electrons = 0;
    int ms2 = 0;
    double e_core = 0.0;
    Tensor2d h_spatial;    // h[i][j], symmetric
    Tensor4d eri_spatial;  // (ij|kl), 8-fold permutational symmetry
};

struct FcidumpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Splits the namelist header body into KEY=VALUE assignments. Chunks without
// '=' continue the previous key's value list (ORBSYM=1,1,1,...).
inline void parse_header_fields(const std::string& header, MolecularIntegrals& mi,
                                bool& have_norb, bool& have_nelec) {
    std::vector<std::string> chunks;
    std::string cur;
    for (char c : header) {
        if (c == ',') {
            chunks.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    chunks.push_back(cur);

    auto parse_long = [](const std::string& key, const std::string& v) {
        std::istringstream vs(v);
        long n = 0;
        if (!(vs >> n)) throw FcidumpError("FCIDUMP: bad " + key + " value '" + v + "'");
        return n;
    };
    for (const auto& chunk : chunks) {
        std::size_t eq = chunk.find('=');
        if (eq == std::string::npos) continue;  // continuation values, ignored
        std::string key = upper(trim(chunk.substr(0, eq)));
        std::string val = trim(chunk.substr(eq + 1));
        if (key == "NORB") {
            long n = parse_long(key, val);
            if (n <= 0) throw FcidumpError("FCIDUMP: bad NORB value");
            mi.n_spatial = static_cast<std::size_t>(n);
            have_norb = true;
        } else if (key == "NELEC") {
            long n = parse_long(key, val);
            if (n < 0) throw FcidumpError("FCIDUMP: bad NELEC value");
            mi.n_electrons = static_cast<std::size_t>(n);
            have_nelec = true;
        } else if (key == "MS2") {
            mi.ms2 = static_cast<int>(parse_long(key, val));
        }
        // ORBSYM / ISYM and anything else are parsed and ignored
    }
}

inline double parse_value(const std::string& tok, std::size_t line_no) {
    std::string t = tok;
    for (auto& c : t) {
        if (c == 'D' || c == 'd') c = 'E';  // Fortran exponents
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw FcidumpError("FCIDUMP line " + std::to_string(line_no) +
                           ": non-numeric value field '" + tok + "'");
    }
    if (used != t.size())
        throw FcidumpError("FCIDUMP line " + std::to_string(line_no) +
                           ": non-numeric value field '" + tok + "'");
    return v;
}

}  // namespace detail

inline MolecularIntegrals parse_fcidump(std::istream& in) {
    MolecularIntegrals mi;
    bool have_norb = false, have_nelec = false;

    // header: everything up to &END or a line starting with '/'
    std::string header;
    std::string line;
    std::size_t line_no = 0;
    bool header_done = false;
    while (!header_done && std::getline(in, line)) {
        ++line_no;
        std::string up = detail::upper(line);
        std::size_t endpos = up.find("&END");
        if (endpos != std::string::npos) {
            header += line.substr(0, endpos) + "\n";
            header_done = true;
            break;
        }
        std::size_t slash = line.find_first_not_of(" \t");
        if (slash != std::string::npos && line[slash] == '/') {
            header += line.substr(0, slash) + "\n";
            header_done = true;
            break;
        }
        header += line + "\n";
    }
    if (!header_done) throw FcidumpError("FCIDUMP: missing &END terminator in header");
    {
        std::size_t amp = header.find('&');  // strip "&FCI"
        if (amp != std::string::npos) {
            std::size_t sp = header.find_first_of(" \t\n", amp);
            header = header.substr(sp == std::string::npos ? header.size() : sp);
        }
    }
    detail::parse_header_fields(header, mi, have_norb, have_nelec);
    if (!have_norb) throw FcidumpError("FCIDUMP: missing required key NORB");
    if (!have_nelec) throw FcidumpError("FCIDUMP: missing required key NELEC");
    if (mi.n_electrons > 2 * mi.n_spatial)
        throw FcidumpError("FCIDUMP: NELEC exceeds 2*NORB");

    const long n = static_cast<long>(mi.n_spatial);
    mi.h_spatial = Tensor2d(mi.n_spatial);
    mi.eri_spatial = Tensor4d(mi.n_spatial);

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string vtok;
        if (!(ls >> vtok)) continue;  // blank line
        double value = detail::parse_value(vtok, line_no);
        long idx[4];
        for (int k = 0; k < 4; ++k) {
            if (!(ls >> idx[k]))
                throw FcidumpError("FCIDUMP line " + std::to_string(line_no) +
                                   ": expected 4 indices");
            if (idx[k] < 0 || idx[k] > n)
                throw FcidumpError("FCIDUMP line " + std::to_string(line_no) +
                                   ": index " + std::to_string(idx[k]) +
                                   " out of range [0, " + std::to_string(n) + "]");
        }
        long i = idx[0], j = idx[1], k = idx[2], l = idx[3];
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            mi.e_core = value;
        } else if (k == 0 && l == 0 && i > 0 && j > 0) {
            mi.h_spatial(i - 1, j - 1) = value;
            mi.h_spatial(j - 1, i - 1) = value;
        } else if (i > 0 && j > 0 && k > 0 && l > 0) {
            const std::size_t a = i - 1, b = j - 1, c = k - 1, d = l - 1;
            for (auto [p, q] : {std::pair{a, b}, {b, a}}) {
                for (auto [r, s] : {std::pair{c, d}, {d, c}}) {
                    mi.eri_spatial(p, q, r, s) = value;
                    mi.eri_spatial(r, s, p, q) = value;
                }
            }
        } else {
            throw FcidumpError("FCIDUMP line " + std::to_string(line_no) +
                               ": unsupported index pattern");
        }
    }
    return mi;
}

inline MolecularIntegrals parse_fcidump(const std::string& text) {
    std::istringstream is(text);
    return parse_fcidump(is);
}

inline MolecularIntegrals parse_fcidump_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FcidumpError("cannot open FCIDUMP file: " + path);
    return parse_fcidump(f);
}

/// Writes the canonical 8-fold-unique records; parse(write(mi)) == mi to 1e-12.
inline std::string write_fcidump(const MolecularIntegrals& mi, double thresh = 0.0) {
    std::ostringstream os;
    const std::size_t n = mi.n_spatial;
    os << "&FCI NORB=" << n << ",NELEC=" << mi.n_electrons << ",MS2=" << mi.ms2 << ",\n";
    os << " ORBSYM=";
    for (std::size_t i = 0; i < n; ++i) os << "1,";
    os << "\n ISYM=1,\n&END\n";
    char buf[96];
    auto rec = [&](double v, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        std::snprintf(buf, sizeof(buf), "%25.17E %3zu %3zu %3zu %3zu\n", v, i, j, k, l);
        os << buf;
    };
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) pairs.emplace_back(i, j);
    for (std::size_t ij = 0; ij < pairs.size(); ++ij) {
        for (std::size_t kl = 0; kl <= ij; ++kl) {
            auto [i, j] = pairs[ij];
            auto [k, l] = pairs[kl];
            double v = mi.eri_spatial(i, j, k, l);
            if (std::abs(v) > thresh) rec(v, i + 1, j + 1, k + 1, l + 1);
        }
    }
    for (auto [i, j] : pairs) {
        double v = mi.h_spatial(i, j);
        if (std::abs(v) > thresh) rec(v, i + 1, j + 1, 0, 0);
    }
    rec(mi.e_core, 0, 0, 0, 0);
    return os.str();
}

}  // namespace adaptrdm
