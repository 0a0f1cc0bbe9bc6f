import pytest

from note_forge.gateway import EndpointConfig, GatewayClient, MockServer


@pytest.fixture(scope="session")
def mock_server():
    with MockServer(rule_seed=0) as server:
        yield server


@pytest.fixture()
def gateway_client(mock_server):
    config = EndpointConfig(base_url=mock_server.base_url, api_key="test-key")
    with GatewayClient(config, retry_backoff=0.01) as client:
        yield client
