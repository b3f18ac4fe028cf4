// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/checkpoint.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ssmmot/errors.hpp"

namespace ssmmot {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr)) {
        throw std::runtime_error("sha256: EVP_Digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

void save_checkpoint(const std::string& path, const ModelParams& params,
                     const ModelConfig& cfg) {
    std::ostringstream body;
    body << kCheckpointHeader << "\n";
    body << "config dims 6 : " << cfg.n_blocks << " " << cfg.model_dim << " "
         << cfg.expand_factor << " " << cfg.input_dim << " " << cfg.embed_dim
         << " " << cfg.max_len << "\n";

    const Eigen::VectorXd flat = pack_params(params, cfg);
    for (const auto& spec : tensor_specs(cfg)) {
        body << spec.name << " dims " << spec.rows;
        if (spec.cols > 0) body << " " << spec.cols;
        body << " :";
        if (spec.cols > 0) {
            const Eigen::Map<const Eigen::MatrixXd> m(flat.data() + spec.offset,
                                                      spec.rows, spec.cols);
            for (int r = 0; r < spec.rows; ++r) {
                for (int c = 0; c < spec.cols; ++c) {
                    body << " " << format_full(m(r, c));
                }
            }
        } else {
            for (int i = 0; i < spec.rows; ++i) {
                body << " " << format_full(flat(spec.offset + i));
            }
        }
        body << "\n";
    }

    const std::string text = body.str();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    out << text << "sha256 " << sha256_hex(text) << "\n";
    if (!out) throw std::runtime_error("save_checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    std::ostringstream raw;
    raw << in.rdbuf();
    const std::string text = raw.str();

    // Split off the trailing digest line and verify it first.
    const std::size_t tail = text.rfind("sha256 ");
    if (tail == std::string::npos) throw ParseError(0, "missing sha256 trailer");
    const std::string payload = text.substr(0, tail);
    std::string digest = text.substr(tail + 7);
    while (!digest.empty() && (digest.back() == '\n' || digest.back() == '\r')) {
        digest.pop_back();
    }
    if (digest != sha256_hex(payload)) throw ParseError(0, "sha256 mismatch");

    std::istringstream body(payload);
    std::string line;
    int line_no = 1;
    if (!std::getline(body, line) || line != kCheckpointHeader) {
        throw ParseError(line_no, "bad checkpoint header");
    }

    auto next_record = [&](std::string& name, std::vector<int>& dims,
                           std::istringstream& values) -> bool {
        if (!std::getline(body, line)) return false;
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> name)) throw ParseError(line_no, "empty record");
        if (!(ls >> tok) || tok != "dims") throw ParseError(line_no, "expected dims");
        dims.clear();
        while (ls >> tok) {
            if (tok == ":") break;
            try {
                dims.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad dimension: " + tok);
            }
        }
        if (tok != ":") throw ParseError(line_no, "expected ':'");
        std::string rest;
        std::getline(ls, rest);
        values = std::istringstream(rest);
        return true;
    };

    std::string name;
    std::vector<int> dims;
    std::istringstream values;
    if (!next_record(name, dims, values) || name != "config" || dims.size() != 1 ||
        dims[0] != 6) {
        throw ParseError(line_no, "expected config record");
    }
    ModelConfig cfg;
    int* fields[6] = {&cfg.n_blocks,  &cfg.model_dim, &cfg.expand_factor,
                      &cfg.input_dim, &cfg.embed_dim, &cfg.max_len};
    for (int* f : fields) {
        if (!(values >> *f)) throw ParseError(line_no, "truncated config record");
    }

    const auto specs = tensor_specs(cfg);
    Eigen::VectorXd flat(param_count(cfg));
    for (const auto& spec : specs) {
        if (!next_record(name, dims, values)) {
            throw ParseError(line_no, "missing tensor record " + spec.name);
        }
        if (name != spec.name) throw ParseError(line_no, "unexpected tensor " + name);
        const bool shape_ok =
            (spec.cols > 0 && dims.size() == 2 && dims[0] == spec.rows &&
             dims[1] == spec.cols) ||
            (spec.cols == 0 && dims.size() == 1 && dims[0] == spec.rows);
        if (!shape_ok) throw ParseError(line_no, "shape mismatch for " + name);

        if (spec.cols > 0) {
            Eigen::Map<Eigen::MatrixXd> m(flat.data() + spec.offset, spec.rows,
                                          spec.cols);
            for (int r = 0; r < spec.rows; ++r) {
                for (int c = 0; c < spec.cols; ++c) {
                    if (!(values >> m(r, c))) {
                        throw ParseError(line_no, "truncated tensor " + name);
                    }
                }
            }
        } else {
            for (int i = 0; i < spec.rows; ++i) {
                if (!(values >> flat(spec.offset + i))) {
                    throw ParseError(line_no, "truncated tensor " + name);
                }
            }
        }
        double extra;
        if (values >> extra) throw ParseError(line_no, "trailing values in " + name);
    }

    return Checkpoint{cfg, unpack_params(flat, cfg)};
}

}  // namespace ssmmot
