#include "butler/skills/json_vqa_backend.hpp"

#include "butler/common/base64.hpp"
#include "butler/perception/png.hpp"

namespace butler::skills {

std::string JsonVqaBackend::ask(const std::string& question, const perception::Frame& frame,
                                std::optional<perception::PixelPoint> mark) {
  nlohmann::json req{{"question", question}, {"image", base64_encode(perception::encode_png(frame.image))}};
  req["mark"] = mark ? nlohmann::json::array({mark->x, mark->y}) : nlohmann::json(nullptr);
  nlohmann::json reply = backend_->call(req);
  if (!reply.is_object() || !reply.contains("answer") || !reply["answer"].is_string()) {
    throw BackendUnreachable("vqa backend reply has no answer");
  }
  return reply["answer"].get<std::string>();
}

}  // namespace butler::skills
