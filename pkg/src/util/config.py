import os
from types import SimpleNamespace

import yaml

# import the config from yaml file and convert it to a dot dictionary
ROOT_PATH = os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))
config_file = os.getenv('CONFIG_FILE', os.path.join(ROOT_PATH, 'config.yaml'))

# import the config file
with open(config_file, 'r') as f:
    config = yaml.safe_load(f)

# every top level key can be overwritten by an environment variable of the same name
for key, value in config.items():
    if key in os.environ:
        config[key] = yaml.safe_load(os.environ[key])

c = SimpleNamespace(**config)
