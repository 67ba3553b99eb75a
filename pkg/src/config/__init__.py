from .config_manager import RunConfig, load_config

__all__ = ["RunConfig", "load_config"]
