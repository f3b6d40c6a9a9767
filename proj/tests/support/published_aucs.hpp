#pragma once

#include <array>
#include <optional>
#include <string_view>

// Published ROC-AUC table (percent): five per-dataset values, the printed
// average and the printed deltas against the SMILES, MolT5 and PubChem rows.
namespace published {

struct Row {
  std::string_view model;
  std::string_view setting;
  std::array<double, 5> auc;  // HIV, BBBP, Clintox, SIDER, Tox21
  double avg;
  std::optional<double> delta_smiles;
  std::optional<double> delta_molt5;
  std::optional<double> delta_pubchem;
};

inline constexpr std::array<std::string_view, 5> kDatasets = {"HIV", "BBBP", "Clintox", "SIDER", "Tox21"};

inline const std::array<Row, 42> kRows = {{
    {"Llama-3-8B", "SMILES", {67.78, 53.08, 63.04, 61.79, 60.34}, 61.21, std::nullopt, 6.53, 0.55},
    {"Llama-3-8B", "MolT5", {47.65, 59.65, 43.20, 61.14, 61.73}, 54.68, -6.53, std::nullopt, -5.98},
    {"Llama-3-8B", "PubChem", {49.85, 72.48, 53.35, 59.99, 67.60}, 60.65, -0.55, 5.98, std::nullopt},
    {"Llama-3-8B", "Llama-3", {53.13, 58.21, 57.13, 57.07, 59.75}, 57.06, -4.15, 2.38, -3.59},
    {"Llama-3-8B", "ChemLLM", {46.83, 60.22, 52.36, 58.50, 50.83}, 53.75, -7.46, -0.93, -6.90},
    {"Llama-3-8B", "GPT-4o", {45.97, 53.72, 54.81, 45.86, 60.90}, 52.25, -8.96, -2.42, -8.40},
    {"Llama-3.1-8B", "SMILES", {38.10, 37.56, 35.30, 52.70, 44.89}, 41.71, std::nullopt, -4.57, -22.36},
    {"Llama-3.1-8B", "MolT5", {43.04, 45.30, 39.28, 52.06, 51.72}, 46.28, 4.57, std::nullopt, -17.8},
    {"Llama-3.1-8B", "PubChem", {58.94, 71.42, 66.03, 57.54, 66.45}, 64.08, 22.36, 17.80, std::nullopt},
    {"Llama-3.1-8B", "Llama-3", {56.80, 47.71, 68.08, 54.21, 60.75}, 57.51, 15.80, 11.23, -6.57},
    {"Llama-3.1-8B", "ChemLLM", {50.83, 52.18, 47.45, 53.17, 49.84}, 50.69, 8.98, 4.41, -13.39},
    {"Llama-3.1-8B", "GPT-4o", {56.64, 53.37, 55.28, 52.60, 61.65}, 55.91, 14.20, 9.63, -8.17},
    {"Ministral-8B", "SMILES", {59.35, 48.87, 60.19, 57.27, 57.42}, 56.62, std::nullopt, 3.53, -5.63},
    {"Ministral-8B", "MolT5", {44.54, 44.10, 53.95, 63.83, 59.02}, 53.09, -3.53, std::nullopt, -9.16},
    {"Ministral-8B", "PubChem", {50.08, 52.77, 79.23, 64.45, 64.72}, 62.25, 5.63, 9.16, std::nullopt},
    {"Ministral-8B", "Llama-3", {52.91, 31.27, 65.49, 50.45, 55.81}, 51.19, -5.43, -1.90, -11.06},
    {"Ministral-8B", "ChemLLM", {46.35, 48.66, 62.11, 58.97, 55.36}, 54.29, -2.33, 1.20, -7.96},
    {"Ministral-8B", "GPT-4o", {51.66, 64.94, 58.73, 60.54, 61.07}, 59.39, 2.77, 6.30, -2.86},
    {"Falcon3-Mamba-7B", "SMILES", {40.64, 48.33, 31.72, 52.53, 47.45}, 44.13, std::nullopt, 0.21, -1.34},
    {"Falcon3-Mamba-7B", "MolT5", {49.02, 47.92, 18.58, 55.84, 48.27}, 43.93, -0.21, std::nullopt, -1.54},
    {"Falcon3-Mamba-7B", "PubChem", {45.40, 58.84, 24.55, 52.00, 46.56}, 45.47, 1.34, 1.54, std::nullopt},
    {"Falcon3-Mamba-7B", "Llama-3", {47.84, 53.40, 50.76, 51.31, 48.44}, 50.35, 6.22, 6.42, 4.88},
    {"Falcon3-Mamba-7B", "ChemLLM", {53.46, 61.82, 45.12, 53.56, 43.43}, 51.48, 7.35, 7.55, 6.01},
    {"Falcon3-Mamba-7B", "GPT-4o", {51.59, 55.73, 53.55, 56.03, 51.54}, 53.69, 9.55, 9.76, 8.22},
    {"ChemLLM-7B", "SMILES", {55.54, 38.69, 24.02, 47.85, 65.59}, 46.34, std::nullopt, -1.93, -8.36},
    {"ChemLLM-7B", "MolT5", {50.33, 41.01, 35.43, 53.06, 61.50}, 48.27, 1.93, std::nullopt, -6.43},
    {"ChemLLM-7B", "PubChem", {54.96, 72.27, 34.37, 51.08, 60.79}, 54.69, 8.36, 6.43, std::nullopt},
    {"ChemLLM-7B", "Llama-3", {56.29, 45.68, 47.51, 44.95, 51.59}, 49.20, 2.87, 0.94, -5.49},
    {"ChemLLM-7B", "ChemLLM", {45.37, 41.83, 42.80, 53.15, 46.60}, 45.95, -0.39, -2.32, -8.74},
    {"ChemLLM-7B", "GPT-4o", {52.68, 55.73, 40.74, 44.59, 62.63}, 51.28, 4.94, 3.01, -3.42},
    {"GPT-3.5", "SMILES", {61.32, 28.94, 63.90, 53.77, 61.92}, 53.97, std::nullopt, -2.56, -11.01},
    {"GPT-3.5", "MolT5", {49.34, 52.64, 64.30, 56.00, 60.39}, 56.53, 2.56, std::nullopt, -8.44},
    {"GPT-3.5", "PubChem", {56.64, 61.11, 76.34, 59.99, 70.81}, 64.98, 11.01, 8.44, std::nullopt},
    {"GPT-3.5", "Llama-3", {52.55, 30.00, 38.27, 52.22, 55.71}, 45.75, -8.22, -10.78, -19.23},
    {"GPT-3.5", "ChemLLM", {50.27, 45.97, 63.03, 53.77, 54.57}, 53.52, -0.45, -3.01, -11.46},
    {"GPT-3.5", "GPT-4o", {49.67, 34.61, 60.83, 62.41, 65.36}, 54.57, 0.60, -1.96, -10.40},
    {"GPT-4o", "SMILES", {47.19, 46.79, 40.00, 52.30, 63.25}, 49.91, std::nullopt, 2.10, -6.17},
    {"GPT-4o", "MolT5", {41.73, 40.57, 38.09, 65.22, 53.42}, 47.80, -2.10, std::nullopt, -8.27},
    {"GPT-4o", "PubChem", {50.96, 50.34, 56.67, 56.89, 65.52}, 56.08, 6.17, 8.27, std::nullopt},
    {"GPT-4o", "Llama-3", {48.95, 36.23, 52.97, 42.73, 62.00}, 48.58, -1.33, 0.77, -7.5},
    {"GPT-4o", "ChemLLM", {53.00, 54.92, 55.59, 45.36, 61.15}, 54.00, 4.10, 6.20, -2.08},
    {"GPT-4o", "GPT-4o", {53.30, 52.73, 57.12, 47.82, 65.34}, 55.26, 5.35, 7.46, -0.82},
}};

}  // namespace published
