"""Per-directory configuration: feature toggles and multi-file programs.

An ``ezasp.json`` in a directory affects every program in it.  Missing
keys take their defaults, unknown keys are ignored with a warning, and an
unparseable file is reported once before the defaults apply.  Toggles
control reporting only; analysis always runs.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, replace

from .syntax import parse_program

logger = logging.getLogger(__name__)

CONFIG_FILE_NAME = "ezasp.json"

_KEY_FIELDS = {
    "syntaxChecking": "syntax_checking",
    "unsafeVariableChecking": "unsafe_variable_checking",
    "orderingChecking": "ordering_checking",
    "stratificationChecking": "stratification_checking",
    "autoReorderEnabled": "auto_reorder_enabled",
    "programFiles": "program_files",
}


class ConfigMalformed(Exception):
    """The configuration file could not be parsed."""


class AlreadyExistsError(Exception):
    """Refusing to overwrite an existing configuration file."""


@dataclass(frozen=True)
class Config:
    syntax_checking: bool = True
    unsafe_variable_checking: bool = True
    ordering_checking: bool = True
    stratification_checking: bool = True
    auto_reorder_enabled: bool = True
    program_files: tuple = ()
    base_dir: str = ""  # directory the config was loaded from; resolves programFiles

    @property
    def multi_file(self) -> bool:
        return bool(self.program_files)


def default_config_json() -> str:
    defaults = Config()
    payload = {}
    for key, attr in _KEY_FIELDS.items():
        value = getattr(defaults, attr)
        payload[key] = list(value) if isinstance(value, tuple) else value
    return json.dumps(payload, indent=4) + "\n"


def parse_config(text: str, base_dir: str = "") -> Config:
    """Parse configuration text; raises ConfigMalformed on unparseable input."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigMalformed(f"malformed {CONFIG_FILE_NAME}: {err}") from err
    if not isinstance(data, dict):
        raise ConfigMalformed(f"malformed {CONFIG_FILE_NAME}: expected a JSON object")
    config = Config(base_dir=base_dir)
    for key, value in data.items():
        attr = _KEY_FIELDS.get(key)
        if attr is None:
            logger.warning("%s: ignoring unknown key %r", CONFIG_FILE_NAME, key)
            continue
        if attr == "program_files":
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                logger.warning(
                    "%s: %r must be an array of strings; using default", CONFIG_FILE_NAME, key
                )
                continue
            distinct = []
            for entry in value:
                if entry in distinct:
                    logger.warning("%s: dropping duplicate program file %r", CONFIG_FILE_NAME, entry)
                else:
                    distinct.append(entry)
            config = replace(config, program_files=tuple(distinct))
        else:
            if not isinstance(value, bool):
                logger.warning("%s: %r must be a boolean; using default", CONFIG_FILE_NAME, key)
                continue
            config = replace(config, **{attr: value})
    return config


def load_config(directory: str) -> Config:
    """Load ``ezasp.json`` from ``directory``; defaults when absent or broken."""
    path = os.path.join(directory, CONFIG_FILE_NAME)
    if not os.path.isfile(path):
        return Config(base_dir=directory)
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        logger.warning("cannot read %s: %s; using defaults", path, err)
        return Config(base_dir=directory)
    try:
        return parse_config(text, base_dir=directory)
    except ConfigMalformed as err:
        logger.warning("%s; using defaults", err)
        return Config(base_dir=directory)


def generate_default_config(directory: str) -> str:
    """Write a default ``ezasp.json``; refuses to overwrite an existing one.

    Returns the path of the created file.
    """
    path = os.path.join(directory, CONFIG_FILE_NAME)
    if os.path.exists(path):
        raise AlreadyExistsError(f"{path} already exists")
    with open(path, "x", encoding="utf-8") as handle:
        handle.write(default_config_json())
    return path


def external_predicates(config: Config, current_file: str) -> frozenset:
    """Predicates defined by the other files of the configured program.

    Every ``programFiles`` entry except ``current_file`` is parsed and its
    defined name/arity pairs are unioned; missing or unreadable files are
    reported and contribute nothing.
    """
    keys: set = set()
    current = os.path.realpath(current_file)
    base = config.base_dir or os.path.dirname(current_file)
    for entry in config.program_files:
        path = entry if os.path.isabs(entry) else os.path.join(base, entry)
        if os.path.realpath(path) == current:
            continue
        try:
            with open(path, encoding="utf-8") as handle:
                source = handle.read()
        except OSError as err:
            logger.warning("cannot read program file %s: %s", path, err)
            continue
        program = parse_program(source, path)
        for construct in program.constructs:
            keys |= construct.defines
    return frozenset(keys)
