from django.conf import settings
from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
        migrations.swappable_dependency(settings.AUTH_USER_MODEL),
    ]

    operations = [
        migrations.CreateModel(
            name='DetectionRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
                ('name', models.CharField(blank=True, max_length=200)),
                ('channel', models.CharField(choices=[('horizontal', 'Horizontal'), ('vertical', 'Vertical'), ('other', 'Other')], default='other', max_length=16)),
                ('unit_label', models.CharField(blank=True, max_length=32)),
                ('sample_rate_hz', models.FloatField()),
                ('inefficiency_threshold', models.FloatField()),
                ('window_size_override', models.PositiveIntegerField(blank=True, null=True)),
                ('window_size', models.PositiveIntegerField()),
                ('sample_count', models.PositiveIntegerField(default=0)),
                ('missing_count', models.PositiveIntegerField(default=0)),
                ('window_count', models.PositiveIntegerField(default=0)),
                ('flagged_count', models.PositiveIntegerField(default=0)),
                ('flagged_fraction', models.FloatField(default=0.0)),
                ('max_im', models.FloatField(default=0.0)),
                ('segments', models.JSONField(blank=True, default=list)),
                ('owner', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='detection_runs', to=settings.AUTH_USER_MODEL)),
            ],
            options={
                'ordering': ['-created_at', '-id'],
                'indexes': [models.Index(fields=['owner', 'channel'], name='detect_run_owner_chan_idx')],
            },
        ),
    ]
