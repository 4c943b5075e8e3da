// Versioned prompt templates. Templates are plain text files named
// `<template_id>.txt` with `{placeholder}` markers; template ids end in
// `.v<N>` which carries the version.
#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace vcass::vision {

enum class CotStep { kClassify, kMapEmotion, kCompose, kSingleShot };

std::string cot_step_name(CotStep step);

struct PromptTemplate {
  std::string template_id;
  std::string text;
  int version = 0;

  // Strict fill: every {placeholder} must have a binding.
  std::string render(const std::map<std::string, std::string>& bindings) const;
};

// Loads `<dir>/<template_id>.txt`; parses the trailing `.v<N>` of the id as
// the version. Throws ConfigError on a missing file, empty body, or
// unversioned id.
PromptTemplate load_prompt(const std::filesystem::path& dir, const std::string& template_id);

}  // namespace vcass::vision
