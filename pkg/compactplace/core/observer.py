"""
Attribute Listeners.

Long-running objects such as the trainer derive from :py:class:`HasObservers`
and announce changes of named attributes (curriculum level, evaluation
success rate). Listeners are called as ``listener(owner, name, value)``; a
listener registered under ``"*"`` hears every attribute.
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Iterable

AttributeListener = Callable[["HasObservers", str, Any], None]

logger = logging.getLogger(__name__)

WILDCARD = "*"


class HasObservers:
    """
    Mixin announcing attribute changes to registered listeners.

    Example:
        >>> trainer.add_attribute_listener("curriculum_level", on_level)
        >>> @trainer.on_attribute(["curriculum_level", "eval_success_rate"])
        ... def report(owner, name, value):
        ...     print(name, value)
    """

    def __init__(self) -> None:
        self._listeners: dict[str, list[AttributeListener]] = {}
        self._announced: dict[str, Any] = {}

    def add_attribute_listener(self, attr_name: str, listener: AttributeListener) -> None:
        """Register ``listener`` for ``attr_name``; registering twice has no effect."""
        registered = self._listeners.setdefault(attr_name, [])
        if listener not in registered:
            registered.append(listener)

    def remove_attribute_listener(self, attr_name: str, listener: AttributeListener) -> None:
        registered = self._listeners.get(attr_name, [])
        if listener in registered:
            registered.remove(listener)
        if not registered:
            self._listeners.pop(attr_name, None)

    def notify_attribute_listeners(self, attr_name: str, value: Any, cache: bool = False) -> None:
        """
        Call the listeners of ``attr_name`` and the wildcard listeners.

        Args:
            attr_name: Attribute that changed.
            value: Its new value.
            cache: Skip the call when ``value`` equals the last announced
                value (levels repeat across evaluations, rates do not).
        """
        if cache:
            if attr_name in self._announced and self._announced[attr_name] == value:
                return
            self._announced[attr_name] = value

        listeners = self._listeners.get(attr_name, []) + self._listeners.get(WILDCARD, [])
        for listener in listeners:
            try:
                listener(self, attr_name, value)
            except Exception:
                logger.exception("listener for %s failed", attr_name)

    def on_attribute(self, names: str | Iterable[str]) -> Callable[[AttributeListener], AttributeListener]:
        """Decorator form of :py:meth:`add_attribute_listener` for one or more names."""

        def decorator(fn: AttributeListener) -> AttributeListener:
            for name in [names] if isinstance(names, str) else names:
                self.add_attribute_listener(name, fn)
            return fn

        return decorator
