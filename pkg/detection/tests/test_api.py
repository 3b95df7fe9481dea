import numpy as np
from django.core.exceptions import ValidationError
from django.test import TestCase, override_settings
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase

from detection.models import DetectionRun

from .factories import DetectionRunFactory, UserFactory
from .helpers import alternating


def burst_samples():
    samples = np.zeros(200)
    samples[80:121] = alternating(41)
    return samples.tolist()


class DetectionRunAPITests(APITestCase):

    def setUp(self):
        self.user = UserFactory()
        self.client.force_authenticate(self.user)
        self.list_url = reverse('detectionrun-list')

    def test_create_runs_detection(self):
        payload = {
            'name': 'burst',
            'channel': 'horizontal',
            'unit_label': 'deg',
            'sample_rate_hz': 500,
            'inefficiency_threshold': 100,
            'samples': burst_samples(),
        }
        response = self.client.post(self.list_url, payload, format='json')

        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data['window_size'], 25)
        self.assertEqual(response.data['sample_count'], 200)
        self.assertEqual(response.data['window_count'], 176)
        self.assertEqual(response.data['segment_count'], 1)
        self.assertNotIn('samples', response.data)
        self.assertNotIn('mask', response.data)
        run = DetectionRun.objects.get(pk=response.data['id'])
        self.assertEqual(run.owner, self.user)
        self.assertEqual(run.segments[0]['start_index'], 58)
        self.assertEqual(run.segments[0]['end_index'], 142)

    def test_missing_samples_are_accepted_as_null(self):
        samples = burst_samples()
        samples[3] = None
        response = self.client.post(self.list_url, {'sample_rate_hz': 500, 'samples': samples}, format='json')
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data['missing_count'], 1)
        self.assertEqual(response.data['inefficiency_threshold'], 100.0)

    def test_include_mask(self):
        response = self.client.post(
            f"{self.list_url}?include_mask=true",
            {'sample_rate_hz': 500, 'samples': burst_samples()},
            format='json',
        )
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        mask = response.data['mask']
        self.assertEqual(len(mask), 200)
        self.assertEqual(sum(mask), response.data['flagged_count'])
        self.assertTrue(all(mask[80:121]))

    def test_window_override(self):
        response = self.client.post(
            self.list_url,
            {'sample_rate_hz': 30, 'window_size_override': 3, 'samples': [0, 2, 0, 2, 0]},
            format='json',
        )
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data['window_size'], 3)

    def test_low_sample_rate_without_override(self):
        response = self.client.post(self.list_url, {'sample_rate_hz': 30, 'samples': [0.0] * 10}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('sample_rate_hz', str(response.data))

    def test_too_few_samples(self):
        response = self.client.post(self.list_url, {'sample_rate_hz': 500, 'samples': [0.0] * 24}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('samples', str(response.data))
        self.assertFalse(DetectionRun.objects.exists())

    @override_settings(RIONEPS_MAX_API_SAMPLES=100)
    def test_sample_limit(self):
        response = self.client.post(self.list_url, {'sample_rate_hz': 500, 'samples': [0.0] * 101}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_list_only_own_runs(self):
        DetectionRunFactory.create_batch(2, owner=self.user)
        DetectionRunFactory(owner=UserFactory())
        response = self.client.get(self.list_url)
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['count'], 2)

    def test_filter_by_channel(self):
        DetectionRunFactory(owner=self.user, channel='horizontal')
        DetectionRunFactory(owner=self.user, channel='vertical')
        response = self.client.get(self.list_url, {'channel': 'vertical'})
        self.assertEqual(response.data['count'], 1)
        self.assertEqual(response.data['results'][0]['channel'], 'vertical')

    def test_retrieve_and_delete(self):
        run = DetectionRunFactory(owner=self.user)
        url = reverse('detectionrun-detail', args=[run.pk])
        self.assertEqual(self.client.get(url).data['name'], run.name)
        self.assertEqual(self.client.delete(url).status_code, status.HTTP_204_NO_CONTENT)
        self.assertFalse(DetectionRun.objects.filter(pk=run.pk).exists())

    def test_other_users_run_is_hidden(self):
        run = DetectionRunFactory(owner=UserFactory())
        url = reverse('detectionrun-detail', args=[run.pk])
        self.assertEqual(self.client.get(url).status_code, status.HTTP_404_NOT_FOUND)
        self.assertEqual(self.client.delete(url).status_code, status.HTTP_404_NOT_FOUND)

    def test_runs_cannot_be_updated(self):
        run = DetectionRunFactory(owner=self.user)
        url = reverse('detectionrun-detail', args=[run.pk])
        response = self.client.put(url, {'name': 'renamed'}, format='json')
        self.assertEqual(response.status_code, status.HTTP_405_METHOD_NOT_ALLOWED)

    def test_authentication_required(self):
        self.client.force_authenticate(None)
        response = self.client.get(self.list_url)
        self.assertEqual(response.status_code, status.HTTP_401_UNAUTHORIZED)

    def test_requests_are_logged(self):
        with self.assertLogs('rioneps', level='INFO') as logs:
            self.client.get(self.list_url)
        request_lines = [line for line in logs.output if 'Request: ' in line]
        self.assertEqual(len(request_lines), 1)
        self.assertIn('"status_code": 200', request_lines[0])
        self.assertIn(f'"user": "{self.user.username}"', request_lines[0])

    def test_client_errors_are_logged_as_warnings(self):
        with self.assertLogs('rioneps', level='WARNING') as logs:
            self.client.post(self.list_url, {'sample_rate_hz': 30, 'samples': [0.0] * 10}, format='json')
        self.assertTrue(any('"status_code": 400' in line for line in logs.output))


class DetectionRunModelTests(TestCase):

    def test_stored_config_round_trips(self):
        run = DetectionRunFactory(sample_rate_hz=30.0, window_size_override=3, window_size=3)
        config = run.detector_config
        self.assertEqual((config.window_size, config.inefficiency_threshold), (3, 100.0))
        run.full_clean()

    def test_clean_rejects_low_rate_without_override(self):
        run = DetectionRunFactory.build(owner=UserFactory(), sample_rate_hz=30.0, window_size=1)
        with self.assertRaises(ValidationError) as ctx:
            run.full_clean()
        self.assertIn('sample_rate_hz', ctx.exception.message_dict)

    def test_clean_rejects_inconsistent_window_size(self):
        run = DetectionRunFactory.build(owner=UserFactory(), window_size=30)
        with self.assertRaises(ValidationError) as ctx:
            run.full_clean()
        self.assertIn('window_size', ctx.exception.message_dict)

    def test_str(self):
        run = DetectionRunFactory(name='s1', flagged_count=12)
        self.assertEqual(str(run), 's1 (horizontal, IT=100): 12/1000 flagged')
