import glob
import importlib
import logging
import os

from .basic_space import BasicSpace
from .basic_space_config import BasicConfigSpace

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


def create_spaces() -> list[BasicSpace]:
    """Discover the catalog: every BasicSpace subclass in spaces/space_*.py, then
    every JSON space definition in spaces/*.json, all with default parameters."""
    # List of space classes from python:
    space_classes: dict[str, type[BasicSpace]] = {}
    space_plugins: list[BasicSpace] = []

    # We are going to list all space plugins:
    curpath = os.path.abspath(os.path.dirname(__file__))
    escaped_spaces_path = glob.escape(os.path.join(curpath, "spaces"))

    # List all the python plugins:
    for file in sorted(glob.glob(os.path.join(escaped_spaces_path, "space_*.py"))):
        module_p = os.path.relpath(file, os.path.join(curpath, "spaces"))

        # Import the module:
        try:
            module = importlib.import_module(".spaces." + module_p[:-3], __package__)
        except Exception as e:
            logger.error("Failed to import module %s: %s", module_p, e)
            continue

        # Lookup space plugins:
        for name in dir(module):
            obj = getattr(module, name)
            if (
                isinstance(obj, type)
                and issubclass(obj, BasicSpace)
                and obj is not BasicSpace
                and obj.__module__ == module.__name__
            ):
                try:
                    plugin = obj()
                except Exception as e:
                    logger.error("Failed to instantiate %s: %s", name, e)
                    continue
                space_classes[plugin.name()] = obj
                space_plugins.append(plugin)

    def resolve(name: str) -> type[BasicSpace]:
        try:
            return space_classes[name]
        except KeyError as err:
            raise ValueError("unknown base space {}".format(name)) from err

    # List all the .json files:
    for file in sorted(glob.glob(os.path.join(escaped_spaces_path, "*.json"))):
        try:
            space_plugins.append(BasicConfigSpace(file, resolve))
        except Exception as e:
            logger.error("Failed to instantiate %s: %s", os.path.basename(file), e)

    return space_plugins
