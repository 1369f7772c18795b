#pragma once

#include "mcfse/conceal.hpp"
#include "mcfse/psnr.hpp"
#include "mcfse/video_io.hpp"

#include <filesystem>
#include <iosfwd>

namespace mcfse {

// One input sequence of an experiment. Raw (headerless) input needs
// explicit dimensions; Y4M carries its own.
struct SequenceSpec {
    std::string name;
    std::filesystem::path path;
    bool raw = false;
    int raw_width = 0;
    int raw_height = 0;
    ChromaMode raw_mode = ChromaMode::C420;
};

// `name:path[:WxH[:420|400]]` or a bare path (name = file stem, raw when
// the extension is not .y4m).
SequenceSpec parse_sequence_spec(const std::string& text);

struct ExperimentConfig {
    std::vector<SequenceSpec> inputs;
    std::vector<Algorithm> algorithms = {Algorithm::kTr, Algorithm::kEbma,
                                         Algorithm::kDmve, Algorithm::kFse3d,
                                         Algorithm::kMcfse};

    // loss pattern: either an explicit file or the grid generator.
    // Frame indices are 0-based.
    std::filesystem::path pattern_file;
    std::vector<int> loss_frames = {16, 46, 76, 106, 136};
    int block_size = 16;
    int stride_x = 64;
    int stride_y = 64;
    int offset = 16;

    ConcealConfig conceal;  // the algorithm field is set per cell

    std::filesystem::path output_dir = "out";
    bool write_streams = true;
    bool dump_pgm = false;
    bool trace = false;                            // per-iteration PSNR curves
    std::vector<std::pair<int, int>> frame_sweep;  // (N_p, N_f) study
};

// Key-value config file: `key = value` lines, '#' comments. `input` may
// repeat. Unknown keys are an error.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

struct CellResult {
    std::string sequence;
    Algorithm algorithm = Algorithm::kTr;
    PsnrResult psnr;
    double seconds = 0.0;
    int blocks_total = 0;
    int blocks_failed = 0;
    std::vector<PsnrResult> per_block;     // one entry per lost block
    std::vector<BlockOutcome> outcomes;    // parallel to per_block
    std::vector<double> trace_mse;         // pooled MSE after each iteration
    std::filesystem::path stream_path;     // emitted concealed Y4M
};

struct SweepRow {
    std::string sequence;
    int prev_frames = 0;
    int next_frames = 0;
    PsnrResult fse3d;
    PsnrResult mcfse;
};

struct ExperimentReport {
    std::vector<CellResult> cells;
    std::vector<SweepRow> sweep;
    std::vector<std::string> warnings;
};

// Runs the full protocol: corrupt, conceal with every requested algorithm,
// measure, and emit streams plus CSV/Markdown reports into output_dir.
// Unreadable sequences are skipped with a warning.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Report emission (also used by run_experiment).
void write_report_csv(const ExperimentReport& report, const std::filesystem::path& path);
void write_report_markdown(const ExperimentReport& report, const ExperimentConfig& config,
                           const std::filesystem::path& path);
void write_blocks_csv(const ExperimentReport& report, const ExperimentConfig& config,
                      const std::filesystem::path& path);
void write_trace_csv(const ExperimentReport& report, const std::filesystem::path& path);
void write_sweep_csv(const ExperimentReport& report, const std::filesystem::path& path);

void print_report_summary(const ExperimentReport& report, std::ostream& out);

}  // namespace mcfse
