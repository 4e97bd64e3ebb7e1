#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ssr/dataset.hpp"
#include "ssr/nn/adam.hpp"
#include "ssr/nn/discriminator.hpp"
#include "ssr/nn/generator.hpp"
#include "ssr/nn/losses.hpp"

namespace ssr {

enum class LrSchedule { constant_then_linear, step };
std::string schedule_to_string(LrSchedule s);
LrSchedule schedule_from_string(const std::string& s);

struct TrainingConfig {
    double lambda_l1 = 100.0;
    int epochs = 50;
    double lr_start = 2e-3;
    double lr_end = 2e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    int batch_size = 4;
    std::uint64_t seed = 0;
    nn::AuxKind aux = nn::AuxKind::l1;
    LrSchedule schedule = LrSchedule::constant_then_linear;
    nn::GeneratorConfig gen;
    nn::DiscriminatorConfig disc;

    void validate() const;
};

struct LossRecord {
    int epoch = 0;
    int step = 0;
    double d_loss = 0;
    double g_adv = 0;
    double g_aux = 0;
    double g_total = 0;  // always g_adv + lambda_l1 * g_aux
};

// Constant lr_start for the first half of the epochs, then linear decay
// reaching exactly lr_end at the final epoch. The step schedule drops
// straight to lr_end at the halfway epoch instead.
double lr_at(int epoch, const TrainingConfig& config);

// Full optimization state; heap-held because the optimizers keep pointers
// into the network parameter storage.
struct TrainState {
    TrainingConfig config;
    std::vector<double> wavelengths;  // target band centers, echoed into checkpoints
    std::unique_ptr<nn::Generator<float>> gen;
    std::unique_ptr<nn::Discriminator<float>> disc;
    std::unique_ptr<nn::Adam<float>> opt_g;
    std::unique_ptr<nn::Adam<float>> opt_d;
    RngStream shuffle;
    int completed_epochs = 0;
    std::vector<LossRecord> history;
};

std::unique_ptr<TrainState> init_train_state(const TrainingConfig& config,
                                             const std::vector<double>& wavelengths);

// Checkpoint directory: manifest.json (configs, epoch, RNG states, loss
// history, parameter table) + params.bin (ordered little-endian float32:
// network parameters then Adam moments).
void save_checkpoint(const TrainState& state, const std::filesystem::path& dir);
std::unique_ptr<TrainState> load_checkpoint(const std::filesystem::path& dir);

// Optional per-step observer (for progress logging); called after each
// recorded step.
using StepObserver = std::function<void(const LossRecord&)>;

// Runs epochs [state.completed_epochs, config.epochs), alternating one
// discriminator and one generator Adam step per batch; writes a checkpoint
// under checkpoint_dir after every epoch. When max_epochs >= 0 the run stops
// after that many additional epochs (an interrupted run that a later call can
// resume); the learning-rate schedule still follows config.epochs.
void train_epochs(TrainState& state, const PatchSet& patches,
                  const std::filesystem::path& checkpoint_dir,
                  const StepObserver& observer = {}, int max_epochs = -1);

// Fresh run over the whole schedule; returns the final state.
std::unique_ptr<TrainState> train(const TrainingConfig& config, const PatchSet& patches,
                                  const std::filesystem::path& checkpoint_dir,
                                  const StepObserver& observer = {});

}  // namespace ssr
