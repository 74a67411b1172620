#include "seekbench/pomdp/io.hpp"

#include <fstream>
#include <sstream>

namespace seekbench::pomdp {

namespace {

Matrix<double> read_matrix(const nlohmann::json& j, std::size_t rows, std::size_t cols, std::string_view what) {
  if (!j.is_array() || j.size() != rows) throw InvalidModel(fmt::format("{}: expected {} rows", what, rows));
  Matrix<double> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw InvalidModel(fmt::format("{}: row {} must have {} entries", what, r, cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw InvalidModel(fmt::format("{}: non-numeric entry", what));
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

nlohmann::json write_matrix(const Matrix<double>& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

DiscretePomdp<double> from_json(const nlohmann::json& j) {
  try {
    const auto states = j.at("states").get<std::vector<std::string>>();
    const auto actions = j.at("actions").get<std::vector<std::string>>();
    const auto observations = j.at("observations").get<std::vector<std::string>>();
    const auto& t = j.at("transition");
    const auto& o = j.at("observation");
    if (!t.is_array() || t.size() != actions.size() || !o.is_array() || o.size() != actions.size()) {
      throw InvalidModel("transition and observation need one entry per action");
    }
    std::vector<Matrix<double>> transition;
    std::vector<Matrix<double>> observation;
    for (std::size_t a = 0; a < actions.size(); ++a) {
      transition.push_back(read_matrix(t[a], states.size(), states.size(), "transition"));
      observation.push_back(read_matrix(o[a], states.size(), observations.size(), "observation"));
    }
    DiscretePomdp<double> m(std::move(transition), std::move(observation),
                            read_matrix(j.at("reward"), states.size(), actions.size(), "reward"),
                            j.at("discount").get<double>());
    m.state_names = states;
    m.action_names = actions;
    m.observation_names = observations;
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidModel(std::string("malformed POMDP file: ") + e.what());
  }
}

DiscretePomdp<double> load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidModel("cannot open POMDP file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return from_json(nlohmann::json::parse(buffer.str()));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidModel(std::string("POMDP file is not valid JSON: ") + e.what());
  }
}

nlohmann::json to_json(const DiscretePomdp<double>& m) {
  nlohmann::ordered_json j;
  auto names = [](const std::vector<std::string>& given, std::size_t n, char prefix) {
    if (given.size() == n) return given;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(fmt::format("{}{}", prefix, i));
    return out;
  };
  j["states"] = names(m.state_names, m.num_states(), 's');
  j["actions"] = names(m.action_names, m.num_actions(), 'a');
  j["observations"] = names(m.observation_names, m.num_observations(), 'o');
  auto t = nlohmann::json::array();
  auto o = nlohmann::json::array();
  for (std::size_t a = 0; a < m.num_actions(); ++a) {
    t.push_back(write_matrix(m.transition(a)));
    o.push_back(write_matrix(m.observation(a)));
  }
  j["transition"] = t;
  j["observation"] = o;
  j["reward"] = write_matrix(m.reward());
  j["discount"] = m.discount();
  return j;
}

DiscretePomdp<double> tiger(double accuracy, double discount) {
  // states: tiger-left, tiger-right; actions: listen, open-left, open-right;
  // observations: hear-left, hear-right
  Matrix<double> stay = Matrix<double>::Identity(2, 2);
  Matrix<double> reset = Matrix<double>::Constant(2, 2, 0.5);
  Matrix<double> hear(2, 2);
  hear << accuracy, 1.0 - accuracy, 1.0 - accuracy, accuracy;
  Matrix<double> flat = Matrix<double>::Constant(2, 2, 0.5);
  Matrix<double> reward(2, 3);
  reward << 0.0, 0.0, 1.0,  //
      0.0, 1.0, 0.0;
  DiscretePomdp<double> m({stay, reset, reset}, {hear, flat, flat}, reward, discount);
  m.state_names = {"tiger-left", "tiger-right"};
  m.action_names = {"listen", "open-left", "open-right"};
  m.observation_names = {"hear-left", "hear-right"};
  return m;
}

}  // namespace seekbench::pomdp
