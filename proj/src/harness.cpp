#include "mcfse/harness.hpp"

#include "mcfse/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mcfse {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, sep)) out.push_back(token);
    return out;
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

int parse_int(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error("cannot parse integer `" + text + "` for " + what);
    }
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error("cannot parse number `" + text + "` for " + what);
    }
}

bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw std::runtime_error("cannot parse flag `" + text + "` for " + what);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (const std::string& tok : split(text, ',')) {
        const std::string t = trim(tok);
        if (!t.empty()) out.push_back(parse_int(t, what));
    }
    return out;
}

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << text;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

bool is_fse(Algorithm algorithm) {
    return algorithm == Algorithm::kFse3d || algorithm == Algorithm::kMcfse;
}

long long block_sse(const PlaneU8& reference, const PlaneU8& patch) {
    long long sum = 0;
    for (Eigen::Index y = 0; y < reference.rows(); ++y) {
        for (Eigen::Index x = 0; x < reference.cols(); ++x) {
            const int diff = static_cast<int>(reference(y, x)) - static_cast<int>(patch(y, x));
            sum += static_cast<long long>(diff) * diff;
        }
    }
    return sum;
}

PsnrResult psnr_from_mse(double mse, long long pixels) {
    PsnrResult r;
    r.mse = mse;
    r.lost_pixels = pixels;
    r.infinite = mse == 0.0;
    r.db = r.infinite ? 0.0 : mse_to_db(mse);
    return r;
}

}  // namespace

SequenceSpec parse_sequence_spec(const std::string& text) {
    const std::vector<std::string> parts = split(text, ':');
    SequenceSpec spec;
    if (parts.empty() || parts.size() > 4) {
        throw std::runtime_error("cannot parse input spec `" + text + "`");
    }
    if (parts.size() == 1) {
        spec.path = parts[0];
        spec.name = spec.path.stem().string();
    } else {
        spec.name = parts[0];
        spec.path = parts[1];
    }
    if (spec.name.empty() || spec.path.empty()) {
        throw std::runtime_error("cannot parse input spec `" + text + "`");
    }

    spec.raw = spec.path.extension() != ".y4m";
    if (parts.size() >= 3) {
        const auto dims = split(parts[2], 'x');
        if (dims.size() != 2) {
            throw std::runtime_error("expected WxH in input spec `" + text + "`");
        }
        spec.raw = true;
        spec.raw_width = parse_int(dims[0], "input width");
        spec.raw_height = parse_int(dims[1], "input height");
    }
    if (parts.size() == 4) {
        if (parts[3] == "420") {
            spec.raw_mode = ChromaMode::C420;
        } else if (parts[3] == "400") {
            spec.raw_mode = ChromaMode::C400;
        } else {
            throw std::runtime_error("chroma mode must be 420 or 400 in `" + text + "`");
        }
    }
    return spec;
}

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "input") {
        config.inputs.push_back(parse_sequence_spec(value));
    } else if (key == "algorithms") {
        config.algorithms.clear();
        for (const std::string& tok : split(value, ',')) {
            const auto algorithm = parse_algorithm(trim(tok));
            if (!algorithm) throw std::runtime_error("unknown algorithm `" + trim(tok) + "`");
            config.algorithms.push_back(*algorithm);
        }
    } else if (key == "frames") {
        config.loss_frames = parse_int_list(value, "frames");
    } else if (key == "block_size") {
        config.block_size = parse_int(value, key);
    } else if (key == "stride_x") {
        config.stride_x = parse_int(value, key);
    } else if (key == "stride_y") {
        config.stride_y = parse_int(value, key);
    } else if (key == "offset") {
        config.offset = parse_int(value, key);
    } else if (key == "pattern_file") {
        config.pattern_file = value;
    } else if (key == "output_dir") {
        config.output_dir = value;
    } else if (key == "write_streams") {
        config.write_streams = parse_bool(value, key);
    } else if (key == "dump_pgm") {
        config.dump_pgm = parse_bool(value, key);
    } else if (key == "trace") {
        config.trace = parse_bool(value, key);
    } else if (key == "iterations") {
        config.conceal.fse.max_iterations = parse_int(value, key);
    } else if (key == "np") {
        config.conceal.prev_frames = parse_int(value, key);
    } else if (key == "nf") {
        config.conceal.next_frames = parse_int(value, key);
    } else if (key == "border") {
        config.conceal.border = parse_int(value, key);
    } else if (key == "band_width") {
        config.conceal.band_width = parse_int(value, key);
    } else if (key == "d_max") {
        config.conceal.d_max = parse_int(value, key);
    } else if (key == "t_abs") {
        config.conceal.t_abs = parse_double(value, key);
    } else if (key == "t_rel") {
        config.conceal.t_rel = parse_double(value, key);
    } else if (key == "rho") {
        config.conceal.fse.rho_hat = parse_double(value, key);
    } else if (key == "gamma") {
        config.conceal.fse.gamma = parse_double(value, key);
    } else if (key == "ebma_boundary") {
        config.conceal.ebma_boundary_width = parse_int(value, key);
    } else if (key == "fft") {
        const auto dims = split(value, 'x');
        if (dims.size() != 3) throw std::runtime_error("fft expects WxHxD");
        config.conceal.fse.fft_width = parse_int(dims[0], "fft width");
        config.conceal.fse.fft_height = parse_int(dims[1], "fft height");
        config.conceal.fse.fft_depth = parse_int(dims[2], "fft depth");
    } else if (key == "sweep") {
        config.frame_sweep.clear();
        for (const std::string& tok : split(value, ',')) {
            const auto pair = split(trim(tok), ':');
            if (pair.size() != 2) throw std::runtime_error("sweep expects np:nf pairs");
            config.frame_sweep.emplace_back(parse_int(pair[0], "sweep np"),
                                            parse_int(pair[1], "sweep nf"));
        }
    } else {
        throw std::runtime_error("unknown config key `" + key + "`");
    }
}

ExperimentConfig load_experiment_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());

    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected `key = value`");
        }
        try {
            apply_config_entry(config, trim(stripped.substr(0, eq)),
                               trim(stripped.substr(eq + 1)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    return config;
}

namespace {

struct LoadedSequence {
    Sequence sequence;
    ChromaPlanes chroma;
};

LoadedSequence load_input(const SequenceSpec& spec) {
    LoadedSequence loaded;
    if (spec.raw) {
        if (spec.raw_width <= 0 || spec.raw_height <= 0) {
            throw std::runtime_error("raw input `" + spec.name + "` needs WxH dimensions");
        }
        loaded.sequence =
            load_raw_yuv(spec.path, spec.raw_width, spec.raw_height, spec.raw_mode);
        loaded.chroma =
            load_raw_yuv_chroma(spec.path, spec.raw_width, spec.raw_height, spec.raw_mode);
    } else {
        loaded.sequence = load_y4m(spec.path);
        loaded.chroma = load_y4m_chroma(spec.path);
    }
    return loaded;
}

LossMask build_mask(const ExperimentConfig& config, const Sequence& seq) {
    if (!config.pattern_file.empty()) {
        return load_pattern_file(config.pattern_file, seq.width, seq.height,
                                 seq.frame_count());
    }
    return build_isolated_pattern(seq.width, seq.height, seq.frame_count(),
                                  config.loss_frames, config.block_size, config.stride_x,
                                  config.stride_y, config.offset);
}

void dump_frames(const Sequence& seq, const LossMask& mask, const fs::path& dir,
                 const std::string& prefix) {
    fs::create_directories(dir);
    for (int t : [&] {
             std::vector<int> frames;
             for (const auto& b : mask.blocks) {
                 if (frames.empty() || frames.back() != b.frame) frames.push_back(b.frame);
             }
             return frames;
         }()) {
        write_pgm(seq.luma[t], dir / (prefix + "_f" + std::to_string(t) + ".pgm"));
    }
}

CellResult run_cell(const ExperimentConfig& config, const std::string& name,
                    const Sequence& original, const Sequence& corrupted,
                    const LossMask& mask, const ChromaPlanes& chroma, Algorithm algorithm,
                    bool emit_outputs) {
    ConcealConfig conceal_config = config.conceal;
    conceal_config.algorithm = algorithm;

    CellResult cell;
    cell.sequence = name;
    cell.algorithm = algorithm;
    cell.blocks_total = static_cast<int>(mask.blocks.size());

    const bool traced = config.trace && is_fse(algorithm) && emit_outputs;
    const int iterations = conceal_config.fse.max_iterations;
    std::vector<long long> trace_sse;
    if (traced) trace_sse.assign(iterations + 1, 0);

    BlockObserver observer;
    if (traced) {
        observer = [&](const BlockOutcome& outcome, const VolumeD& volume,
                       const FseModel<double>& model) {
            const auto patches = per_iteration_patches(model, volume, conceal_config.fse);
            const PlaneU8 truth =
                original.luma[outcome.block.frame].block(outcome.block.y0, outcome.block.x0,
                                                         outcome.block.size,
                                                         outcome.block.size);
            for (std::size_t nu = 0; nu + 1 < patches.size(); ++nu) {
                trace_sse[nu] += block_sse(truth, patches[nu]);
            }
        };
    }

    const auto start = std::chrono::steady_clock::now();
    ConcealResult result = conceal_sequence(corrupted, mask, conceal_config, observer);
    cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                       .count();

    cell.psnr = psnr_lost_pixels(original, result.sequence, mask);
    cell.blocks_failed = result.failed_blocks();
    for (const BlockOutcome& outcome : result.blocks) {
        cell.per_block.push_back(psnr_block(original, result.sequence, outcome.block));
    }
    cell.outcomes = std::move(result.blocks);

    if (traced) {
        long long total_pixels = 0;
        for (const auto& b : mask.blocks) total_pixels += static_cast<long long>(b.size) * b.size;
        // blocks the observer never saw keep their emitted content at every point
        for (const BlockOutcome& outcome : cell.outcomes) {
            if (outcome.ok && outcome.used_fse) continue;
            const auto& b = outcome.block;
            const long long sse = block_sse(
                original.luma[b.frame].block(b.y0, b.x0, b.size, b.size),
                PlaneU8(result.sequence.luma[b.frame].block(b.y0, b.x0, b.size, b.size)));
            for (int nu = 0; nu < iterations; ++nu) trace_sse[nu] += sse;
        }
        cell.trace_mse.resize(iterations + 1);
        for (int nu = 0; nu < iterations; ++nu) {
            cell.trace_mse[nu] =
                static_cast<double>(trace_sse[nu]) / static_cast<double>(total_pixels);
        }
        // the last point is the emitted result by definition
        cell.trace_mse[iterations] = cell.psnr.mse;
    }

    if (emit_outputs && config.write_streams) {
        cell.stream_path =
            config.output_dir / (name + "_" + algorithm_name(algorithm) + ".y4m");
        write_y4m(result.sequence, cell.stream_path, &chroma);
    }
    if (emit_outputs && config.dump_pgm) {
        dump_frames(result.sequence, mask, config.output_dir / "pgm",
                    name + "_" + algorithm_name(algorithm));
    }
    return cell;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    if (config.inputs.empty()) throw std::runtime_error("experiment has no inputs");
    fs::create_directories(config.output_dir);

    ExperimentReport report;
    for (const SequenceSpec& spec : config.inputs) {
        LoadedSequence loaded;
        try {
            loaded = load_input(spec);
        } catch (const std::exception& e) {
            report.warnings.push_back("skipping `" + spec.name + "`: " + e.what());
            continue;
        }
        const Sequence& original = loaded.sequence;

        LossMask mask = build_mask(config, original);
        const Sequence corrupted = apply_loss(original, mask);

        if (config.write_streams) {
            write_y4m(corrupted, config.output_dir / (spec.name + "_corrupted.y4m"),
                      &loaded.chroma);
            write_pattern_file(mask, config.output_dir / (spec.name + "_pattern.txt"));
        }
        if (config.dump_pgm) {
            dump_frames(original, mask, config.output_dir / "pgm", spec.name + "_original");
            dump_frames(corrupted, mask, config.output_dir / "pgm",
                        spec.name + "_corrupted");
        }

        for (Algorithm algorithm : config.algorithms) {
            report.cells.push_back(run_cell(config, spec.name, original, corrupted, mask,
                                            loaded.chroma, algorithm, true));
        }

        for (const auto& [np, nf] : config.frame_sweep) {
            ExperimentConfig sweep_config = config;
            sweep_config.conceal.prev_frames = np;
            sweep_config.conceal.next_frames = nf;
            sweep_config.trace = false;
            SweepRow row;
            row.sequence = spec.name;
            row.prev_frames = np;
            row.next_frames = nf;
            row.fse3d = run_cell(sweep_config, spec.name, original, corrupted, mask,
                                 loaded.chroma, Algorithm::kFse3d, false)
                            .psnr;
            row.mcfse = run_cell(sweep_config, spec.name, original, corrupted, mask,
                                 loaded.chroma, Algorithm::kMcfse, false)
                            .psnr;
            report.sweep.push_back(row);
        }
    }

    write_report_csv(report, config.output_dir / "report.csv");
    write_report_markdown(report, config, config.output_dir / "report.md");
    write_blocks_csv(report, config, config.output_dir / "blocks.csv");
    if (config.trace) write_trace_csv(report, config.output_dir / "psnr_over_iterations.csv");
    if (!report.sweep.empty()) {
        write_sweep_csv(report, config.output_dir / "frame_count_sweep.csv");
    }
    return report;
}

void write_report_csv(const ExperimentReport& report, const fs::path& path) {
    std::ostringstream out;
    out << "algorithm,sequence,psnr_db,infinite,mse,lost_pixels,blocks,failed_blocks,"
           "seconds\n";
    for (const CellResult& cell : report.cells) {
        out << algorithm_name(cell.algorithm) << "," << cell.sequence << ","
            << format_psnr(cell.psnr, 4) << "," << (cell.psnr.infinite ? 1 : 0) << ","
            << fixed(cell.psnr.mse, 6) << "," << cell.psnr.lost_pixels << ","
            << cell.blocks_total << "," << cell.blocks_failed << ","
            << fixed(cell.seconds, 3) << "\n";
    }
    write_text_atomic(path, out.str());
}

void write_report_markdown(const ExperimentReport& report, const ExperimentConfig& config,
                           const fs::path& path) {
    std::vector<std::string> sequences;
    for (const CellResult& cell : report.cells) {
        if (std::find(sequences.begin(), sequences.end(), cell.sequence) ==
            sequences.end()) {
            sequences.push_back(cell.sequence);
        }
    }

    std::ostringstream out;
    out << "# Concealment comparison\n\n";
    out << "PSNR in dB over lost pixels; the squared error is pooled over all lost\n"
           "pixels of a sequence before conversion to dB.\n\n";
    out << "| Algorithm |";
    for (const auto& s : sequences) out << " " << s << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < sequences.size(); ++i) out << "---|";
    out << "\n";
    for (Algorithm algorithm : config.algorithms) {
        out << "| " << algorithm_name(algorithm) << " |";
        for (const auto& s : sequences) {
            const auto it = std::find_if(
                report.cells.begin(), report.cells.end(), [&](const CellResult& c) {
                    return c.sequence == s && c.algorithm == algorithm;
                });
            out << " " << (it != report.cells.end() ? format_psnr(it->psnr, 2) : "-")
                << " |";
        }
        out << "\n";
    }

    if (!report.sweep.empty()) {
        out << "\n## Frame-count study\n\n| N_p | N_f |";
        for (const auto& s : sequences) out << " " << s << " fse3d | " << s << " mcfse |";
        out << "\n|---|---|";
        for (std::size_t i = 0; i < sequences.size(); ++i) out << "---|---|";
        out << "\n";
        std::vector<std::pair<int, int>> pairs;
        for (const SweepRow& row : report.sweep) {
            const auto pair = std::make_pair(row.prev_frames, row.next_frames);
            if (std::find(pairs.begin(), pairs.end(), pair) == pairs.end()) {
                pairs.push_back(pair);
            }
        }
        for (const auto& [np, nf] : pairs) {
            out << "| " << np << " | " << nf << " |";
            for (const auto& s : sequences) {
                const auto it = std::find_if(report.sweep.begin(), report.sweep.end(),
                                             [&](const SweepRow& r) {
                                                 return r.sequence == s &&
                                                        r.prev_frames == np &&
                                                        r.next_frames == nf;
                                             });
                if (it != report.sweep.end()) {
                    out << " " << format_psnr(it->fse3d, 2) << " | "
                        << format_psnr(it->mcfse, 2) << " |";
                } else {
                    out << " - | - |";
                }
            }
            out << "\n";
        }
    }

    if (!report.warnings.empty()) {
        out << "\n## Warnings\n\n";
        for (const auto& w : report.warnings) out << "- " << w << "\n";
    }
    write_text_atomic(path, out.str());
}

void write_blocks_csv(const ExperimentReport& report, const ExperimentConfig&,
                      const fs::path& path) {
    std::ostringstream out;
    out << "sequence,algorithm,frame,x0,y0,size,ok,aligned,psnr_db,infinite,error\n";
    for (const CellResult& cell : report.cells) {
        for (std::size_t i = 0; i < cell.outcomes.size(); ++i) {
            const BlockOutcome& o = cell.outcomes[i];
            const PsnrResult& p = cell.per_block[i];
            out << cell.sequence << "," << algorithm_name(cell.algorithm) << ","
                << o.block.frame << "," << o.block.x0 << "," << o.block.y0 << ","
                << o.block.size << "," << (o.ok ? 1 : 0) << "," << (o.aligned ? 1 : 0)
                << "," << format_psnr(p, 4) << "," << (p.infinite ? 1 : 0) << ","
                << o.error << "\n";
        }
    }
    write_text_atomic(path, out.str());
}

void write_trace_csv(const ExperimentReport& report, const fs::path& path) {
    std::vector<const CellResult*> traced;
    std::size_t rows = 0;
    for (const CellResult& cell : report.cells) {
        if (!cell.trace_mse.empty()) {
            traced.push_back(&cell);
            rows = std::max(rows, cell.trace_mse.size());
        }
    }
    if (traced.empty()) return;

    std::ostringstream out;
    out << "iteration";
    for (const CellResult* cell : traced) {
        out << "," << cell->sequence << ":" << algorithm_name(cell->algorithm);
    }
    out << "\n";
    for (std::size_t nu = 0; nu < rows; ++nu) {
        out << nu;
        for (const CellResult* cell : traced) {
            out << ",";
            if (nu < cell->trace_mse.size()) {
                out << format_psnr(
                    psnr_from_mse(cell->trace_mse[nu], cell->psnr.lost_pixels), 4);
            }
        }
        out << "\n";
    }
    write_text_atomic(path, out.str());
}

void write_sweep_csv(const ExperimentReport& report, const fs::path& path) {
    std::ostringstream out;
    out << "sequence,prev_frames,next_frames,fse3d_db,mcfse_db\n";
    for (const SweepRow& row : report.sweep) {
        out << row.sequence << "," << row.prev_frames << "," << row.next_frames << ","
            << format_psnr(row.fse3d, 4) << "," << format_psnr(row.mcfse, 4) << "\n";
    }
    write_text_atomic(path, out.str());
}

void print_report_summary(const ExperimentReport& report, std::ostream& out) {
    for (const CellResult& cell : report.cells) {
        out << cell.sequence << " " << algorithm_name(cell.algorithm) << ": "
            << format_psnr(cell.psnr, 2) << " dB (" << cell.blocks_total << " blocks";
        if (cell.blocks_failed > 0) out << ", " << cell.blocks_failed << " failed";
        out << ", " << fixed(cell.seconds, 2) << " s)\n";
    }
    for (const SweepRow& row : report.sweep) {
        out << row.sequence << " sweep np=" << row.prev_frames << " nf=" << row.next_frames
            << ": fse3d " << format_psnr(row.fse3d, 2) << " dB, mcfse "
            << format_psnr(row.mcfse, 2) << " dB\n";
    }
    for (const auto& w : report.warnings) out << "warning: " << w << "\n";
}

}  // namespace mcfse
