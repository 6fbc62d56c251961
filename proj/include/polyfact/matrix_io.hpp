// Matrix file formats: CSV with a "# rows,cols" comment header and raw
// float64 binary (.f64) with an 8-byte little-endian shape header
// (uint32 rows, uint32 cols). Format is selected by file extension.
#ifndef POLYFACT_MATRIX_IO_HPP
#define POLYFACT_MATRIX_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "polyfact/types.hpp"

namespace polyfact {

inline void write_matrix_csv(const std::string& path, const Matrix& M) {
    std::ofstream out(path);
    if (!out) throw PolyfactError("cannot open for writing: " + path);
    out << "# " << M.rows() << "," << M.cols() << "\n";
    out << std::setprecision(17);
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            if (j) out << ",";
            out << M(i, j);
        }
        out << "\n";
    }
    if (!out) throw PolyfactError("write failed: " + path);
}

inline Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PolyfactError("cannot open: " + path);
    std::string line;
    Index rows = -1, cols = -1;
    std::vector<double> vals;
    Index data_rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            char comma;
            std::istringstream hs(body);
            long long r, c;
            if (hs >> r >> comma >> c && comma == ',') {
                rows = r;
                cols = c;
            }
            continue;
        }
        std::istringstream ls(line);
        std::string tok;
        Index n = 0;
        while (std::getline(ls, tok, ',')) {
            try {
                vals.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw PolyfactError("bad number '" + tok + "' in " + path);
            }
            ++n;
        }
        if (cols >= 0 && n != cols)
            throw PolyfactError("row width mismatch in " + path);
        if (cols < 0) cols = n;
        ++data_rows;
    }
    if (cols <= 0 || data_rows == 0) throw PolyfactError("empty matrix file: " + path);
    if (rows >= 0 && rows != data_rows)
        throw PolyfactError("declared shape does not match data in " + path);
    Matrix M(data_rows, cols);
    for (Index i = 0; i < data_rows; ++i)
        for (Index j = 0; j < cols; ++j) M(i, j) = vals[static_cast<size_t>(i * cols + j)];
    return M;
}

inline void write_matrix_f64(const std::string& path, const Matrix& M) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PolyfactError("cannot open for writing: " + path);
    auto put_u32 = [&](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    put_u32(static_cast<std::uint32_t>(M.rows()));
    put_u32(static_cast<std::uint32_t>(M.cols()));
    for (Index i = 0; i < M.rows(); ++i)
        for (Index j = 0; j < M.cols(); ++j) {
            double v = M(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(double));
        }
    if (!out) throw PolyfactError("write failed: " + path);
}

inline Matrix read_matrix_f64(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PolyfactError("cannot open: " + path);
    auto get_u32 = [&]() {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    };
    std::uint32_t rows = get_u32(), cols = get_u32();
    if (!in) throw PolyfactError("truncated header: " + path);
    if (rows == 0 || cols == 0) throw PolyfactError("empty matrix file: " + path);
    Matrix M(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
        for (std::uint32_t j = 0; j < cols; ++j) {
            double v;
            in.read(reinterpret_cast<char*>(&v), sizeof(double));
            M(i, j) = v;
        }
    if (!in) throw PolyfactError("truncated data: " + path);
    return M;
}

inline void write_matrix(const std::string& path, const Matrix& M) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".f64")
        write_matrix_f64(path, M);
    else
        write_matrix_csv(path, M);
}

inline Matrix read_matrix(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".f64")
        return read_matrix_f64(path);
    return read_matrix_csv(path);
}

} // namespace polyfact

#endif
