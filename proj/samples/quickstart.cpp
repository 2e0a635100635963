// Fit a small QNN to a bump, then look at the same model through shot noise
// and an ibm-fez noise model, with and without the offset correction.

#include <cmath>
#include <cstdio>
#include <vector>

#include "qnnlab/qnnlab.hpp"

using namespace qnnlab;

int main() {
    const circuit::CircuitConfig cfg{4, 0, 1.2};  // 4 blocks, 4 qubits, output scale R = 1.2

    train::TrainingSet data;
    for (int i = 0; i < 41; ++i) {
        const double x = -2.0 + 0.1 * i;
        data.inputs.push_back({x});
        data.targets.push_back(std::exp(-x * x));
    }
    const auto fit = train::fit(train::Method::DE, data, cfg, train::Budget{}, 7);
    std::printf("trained %d blocks on %d qubits, final loss %.3e\n", cfg.blocks, cfg.qubits(), fit.final_loss);

    const auto budget = hardware::backend_budget(hardware::ibm_fez(), cfg, 1.0, 0.5);
    const auto corr = noise::offset_correction(budget.alpha, cfg);
    std::printf("ibm-fez: alpha = %.5f, bound total = %.4f\n\n", budget.alpha, budget.report.total);

    std::printf("%6s %9s %9s %9s %9s %9s\n", "x", "target", "exact", "shots", "noisy", "corrected");
    for (double x : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
        const std::vector<double> in{x};
        const auto state = circuit::final_state(fit.params, in, cfg);
        const double exact = circuit::circuit_output(circuit::grouped_probabilities(state, cfg), cfg.scale);
        const double shots = sampler::sampled_output(circuit::outcome_distribution(state), cfg, 8192, 11);
        const double noisy = noise::noisy_output(exact, budget.alpha, cfg);
        std::printf("%6.2f %9.5f %9.5f %9.5f %9.5f %9.5f\n", x, std::exp(-x * x), exact, shots, noisy,
                    noise::corrected_output(noisy, corr));
    }
}
