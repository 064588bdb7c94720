#include "audex/io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "audex/error.hpp"

namespace audex {

namespace {

nlohmann::json config_json(const AttributionFile& file) {
  nlohmann::json config = nlohmann::json::object();
  switch (file.tensor.method) {
    case Method::Saliency:
      break;
    case Method::Lrp:
      config["epsilon"] = file.lrp.epsilon;
      break;
    case Method::Shap:
      config["num_permutations"] = file.shap.num_permutations;
      config["seed"] = file.shap.seed;
      config["background"] = file.shap.background.values.data;
      break;
  }
  return config;
}

}  // namespace

void write_attribution_json(const AttributionFile& file,
                            const std::string& path) {
  const AttributionTensor& tensor = file.tensor;
  if (tensor.targets.size() != tensor.num_windows()) {
    throw Error(ErrorCode::LengthMismatch,
                "tensor has " + std::to_string(tensor.num_windows()) +
                    " windows but " + std::to_string(tensor.targets.size()) +
                    " targets");
  }

  nlohmann::json doc;
  doc["method"] = method_name(tensor.method);
  doc["config"] = config_json(file);
  doc["targets"] = tensor.targets;
  doc["shape"] = {tensor.num_windows(), kWindowRows, kNumCoefficients};

  std::vector<double> flat;
  flat.reserve(tensor.num_windows() * kWindowFeatures);
  for (const Mat& m : tensor.values) {
    require_shape(m, kWindowRows, kNumCoefficients, "attribution matrix");
    flat.insert(flat.end(), m.data.begin(), m.data.end());
  }
  doc["values"] = std::move(flat);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << doc.dump() << "\n";
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

AttributionFile read_attribution_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("invalid attribution JSON: ") + e.what());
  }

  AttributionFile file;
  try {
    try {
      file.tensor.method =
          method_from_name(doc.at("method").get<std::string>());
    } catch (const Error&) {
      throw Error(ErrorCode::ParseError, "unknown method in " + path);
    }

    const auto shape = doc.at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != 3 || shape[1] != kWindowRows ||
        shape[2] != kNumCoefficients) {
      throw Error(ErrorCode::ParseError, "unexpected tensor shape in " + path);
    }
    const std::size_t n = shape[0];

    file.tensor.targets = doc.at("targets").get<std::vector<std::size_t>>();
    if (file.tensor.targets.size() != n) {
      throw Error(ErrorCode::ParseError, "target count does not match shape");
    }
    for (std::size_t t : file.tensor.targets) {
      if (t >= CharSet::kSize) {
        throw Error(ErrorCode::ParseError, "target index out of range");
      }
    }

    const auto flat = doc.at("values").get<std::vector<double>>();
    if (flat.size() != n * kWindowFeatures) {
      throw Error(ErrorCode::ParseError, "value count does not match shape");
    }
    file.tensor.values.assign(n, Mat(kWindowRows, kNumCoefficients));
    for (std::size_t i = 0; i < n; ++i) {
      std::copy(flat.begin() + static_cast<std::ptrdiff_t>(i * kWindowFeatures),
                flat.begin() +
                    static_cast<std::ptrdiff_t>((i + 1) * kWindowFeatures),
                file.tensor.values[i].data.begin());
    }

    const nlohmann::json& config = doc.at("config");
    if (file.tensor.method == Method::Lrp) {
      file.lrp.epsilon = config.at("epsilon").get<double>();
    } else if (file.tensor.method == Method::Shap) {
      file.shap.num_permutations =
          config.at("num_permutations").get<std::size_t>();
      file.shap.seed = config.at("seed").get<std::uint64_t>();
      const auto bg = config.at("background").get<std::vector<double>>();
      if (bg.size() != kWindowFeatures) {
        throw Error(ErrorCode::ParseError, "background has wrong length");
      }
      file.shap.background.values.data = bg;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("malformed attribution file: ") + e.what());
  }
  return file;
}

void write_attribution_csv(const AttributionTensor& tensor,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);

  out << "mfcc_0";
  for (std::size_t k = 1; k < kNumCoefficients; ++k) out << ",mfcc_" << k;
  out << "\n";

  char buf[40];
  for (const Mat& m : tensor.values) {
    require_shape(m, kWindowRows, kNumCoefficients, "attribution matrix");
    for (std::size_t j = 0; j < kWindowRows; ++j) {
      for (std::size_t k = 0; k < kNumCoefficients; ++k) {
        std::snprintf(buf, sizeof(buf), "%.9g", m(j, k));
        if (k > 0) out << ',';
        out << buf;
      }
      out << "\n";
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace audex
