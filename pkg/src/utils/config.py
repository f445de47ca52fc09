"""
Configuration management for rsld-lab
"""
import os
import json
from pathlib import Path


class Config:
    """Engine and lab configuration manager"""

    def __init__(self, config_dir=None):
        if config_dir is None:
            config_dir = os.environ.get('RSLD_CONFIG_DIR') or Path.home() / '.rsldlab'
        self.config_dir = Path(config_dir)
        self.config_file = self.config_dir / 'config.json'
        self.default_config = {
            # Derivation settings
            'max_steps': 1000,
            'tree_depth': 10,
            'node_budget': 1_000_000,
            'exhaustive_limit': 12,
            'occurs_check': True,
            'verify_reductions': True,

            # Rules
            'list_rule': 'leftmost',
            'priority_rule': 'stack',

            # Output settings
            'trace_format': 'text',
            'color': 'auto',
            'log_level': 'WARNING',

            # Property lab settings
            'check_trials': 1000,
            'seed': 0,
            'workers': 1,
            'search_depth_factor': 2,

            'recent_programs': []
        }
        self.config = self.load_config()

    def load_config(self):
        """Load configuration from file"""
        if not self.config_file.exists():
            return self.default_config.copy()

        try:
            with open(self.config_file, 'r') as f:
                config = json.load(f)
                # Merge with defaults to ensure all keys exist
                merged_config = self.default_config.copy()
                merged_config.update(config)
                return merged_config
        except (json.JSONDecodeError, IOError):
            return self.default_config.copy()

    def save_config(self):
        """Save configuration to file"""
        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
            with open(self.config_file, 'w') as f:
                json.dump(self.config, f, indent=2)
        except OSError:
            pass  # Fail silently

    def get(self, key, default=None):
        """Get configuration value"""
        return self.config.get(key, default)

    def set(self, key, value):
        """Set configuration value"""
        self.config[key] = value

    def default_seed(self) -> int:
        """RSLD_SEED overrides the configured seed"""
        value = os.environ.get('RSLD_SEED')
        if value is not None:
            try:
                return int(value)
            except ValueError:
                pass
        return int(self.config.get('seed', 0))

    def add_recent_program(self, path) -> bool:
        """Move path to the front of the recent programs list; False when it already was there"""
        recent = list(self.config.get('recent_programs', []))
        path = str(path)
        if recent[:1] == [path]:
            return False
        if path in recent:
            recent.remove(path)
        recent.insert(0, path)
        self.config['recent_programs'] = recent[:10]  # Keep only last 10
        return True


# Global config instance
config = Config()
