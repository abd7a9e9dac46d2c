"""Configuration module for egn-bounds."""

from config.settings import settings

__all__ = ["settings"]
