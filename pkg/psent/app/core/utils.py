"""
Plugin Loader Utilities for psent.

This module provides an utility function to dynamically load plugin objects
from entry points declared by installed distributions.

It is used for extra demo equations (entry point group: `psent.demo_equations`)
next to the built-in ones.

Example:
    .. code-block:: python

        from psent.app.core.utils import load_plugin

        equation_cls = load_plugin("psent.demo_equations", "smith")
        equation = equation_cls()

Raises:
    ValueError: If no matching plugin is found for the given group and name.
"""

from importlib.metadata import entry_points
from typing import Any, List


def available_plugins(group: str) -> List[str]:
    """
    List the names registered under an entry point group.

    Args:
        group (str): Entry point group name.

    Returns:
        List[str]: Sorted plugin names.
    """
    return sorted(ep.name for ep in entry_points(group=group))


def load_plugin(group: str, name: str) -> Any:
    """
    Load a plugin class or factory function from entry points.

    Args:
        group (str): Entry point group name.
        name (str): Name of the registered plugin.

    Returns:
        The loaded plugin object (class or function).
    """
    matches = [ep for ep in entry_points(group=group) if ep.name == name]
    if not matches:
        raise ValueError(f"No entry point named '{name}' found in group '{group}'")
    return matches[0].load()
